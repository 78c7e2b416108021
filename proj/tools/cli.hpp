#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sightglow/raster.hpp"

namespace sightglow::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIo = 2,
    kInvalidParameter = 3,
};

/// Runs one invocation. `args` excludes the program name. Machine-readable
/// key=value records go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SIGHTGLOW_PROFILE, else $XDG_CONFIG_HOME/sightglow/profile.json, else
/// ~/.config/sightglow/profile.json.
std::filesystem::path default_profile_path();

struct PanelSpec {
    std::string label;
    enum class Kind { Raw, Simulate, Daltonize } kind = Kind::Raw;
    CvdType type = CvdType::Deuteranopia;
    Severity severity = Severity::full();
    Daltonizer daltonizer{DaltonizeMode::PaperEquations, CvdType::Deuteranopia, 1.0};

    PixelPipeline pipeline() const;
};

/// Thrown for grammar errors in the panel mini-language.
class PanelSyntaxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Comma-separated name[:arg[:arg]] tokens:
///   raw
///   sim[:<type>[:<severity>]]        defaults deutan, 1.0
///   dalt[:<mode>[:<type>]]           defaults paper-equations, deutan
std::vector<PanelSpec> parse_panels(const std::string& text);

}  // namespace sightglow::cli
