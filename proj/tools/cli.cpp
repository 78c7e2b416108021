#include "cli.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sightglow/filter_forge.hpp"

namespace sightglow::cli {

namespace {

/// Maps onto exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr const char* kTypeNames = "protan|deutan|tritan (or protanopia|deuteranopia|tritanopia)";
constexpr const char* kDaltonizeModes = "paper-equations|paper-printed|redistribute";
constexpr const char* kProfileModes = "off|paper-equations|paper-printed|redistribute";

constexpr const char* kPanelHelp =
    "Comma-separated panel tokens, name[:arg[:arg]]:\n"
    "  raw                          the input unchanged\n"
    "  sim[:TYPE[:SEVERITY]]        dichromacy simulation (default deutan:1)\n"
    "  dalt[:MODE[:TYPE]]           daltonization (default paper-equations;\n"
    "                               TYPE is used by redistribute, default deutan)\n"
    "Example: raw,sim:deutan:1.0,dalt:paper-equations";

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

CvdType require_type(const std::string& text) {
    const auto t = parse_cvd_type(text);
    if (!t) {
        throw UsageError("unknown CVD type '" + text + "'; valid types: " + kTypeNames);
    }
    return *t;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageError(ImageError::Kind::NotFound, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text,
                     bool create_parents = false) {
    if (create_parents && path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ImageError(ImageError::Kind::Io, "cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw ImageError(ImageError::Kind::Io, "write failed for " + path.string());
    }
}

/// Profile file problems are I/O failures (exit 2), not parameter errors.
class StoredProfileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

VisionProfile load_profile_file(const std::filesystem::path& path, std::ostream& err) {
    const std::string text = read_text_file(path);
    std::vector<std::string> warnings;
    try {
        VisionProfile p = parse_profile(text, &warnings);
        for (const auto& w : warnings) {
            err << "warning: " << path.string() << ": " << w << "\n";
        }
        return p;
    } catch (const PackParseError& e) {
        throw StoredProfileError(path.string() + ": " + e.what());
    } catch (const UnsupportedVersionError& e) {
        throw StoredProfileError(path.string() + ": " + e.what());
    }
}

struct ProfileFlags {
    std::optional<std::string> mode;
    std::optional<std::string> type;
    std::optional<double> severity;
    std::optional<double> contrast;
    std::optional<double> saturation;
    std::optional<double> strength;
    std::optional<std::string> id;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--mode", mode, std::string("Daltonization mode: ") + kProfileModes);
        cmd->add_option("--type", type, std::string("CVD type: ") + kTypeNames);
        cmd->add_option("--severity", severity, "Simulation severity in [0, 1]");
        cmd->add_option("--contrast", contrast, "Contrast in [0.2, 3]");
        cmd->add_option("--saturation", saturation, "Saturation in [0, 3]");
        cmd->add_option("--strength", strength, "Redistribute strength in [0, 1]");
        cmd->add_option("--id", id, "Filter element id");
    }

    void apply(VisionProfile& p) const {
        if (mode) {
            const auto m = parse_daltonize_mode(*mode);
            if (!m) {
                throw UsageError("unknown mode '" + *mode + "'; valid modes: " + kProfileModes);
            }
            p.set_daltonize_mode(*m);
        }
        if (type) p.set_cvd_type(require_type(*type));
        if (severity) p.set_severity(Severity(*severity));
        if (contrast) p.set_contrast(*contrast);
        if (saturation) p.set_saturation(*saturation);
        if (strength) p.set_redistribute_strength(*strength);
        if (id) p.set_filter_id(*id);
    }
};

struct ImageArgs {
    std::string input;
    std::string output;
    int workers = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("input", input, "Input PNG/PPM, or a directory of frame_NNNNNN.png")
            ->required();
        cmd->add_option("output", output, "Output image, or a directory for frame sequences")
            ->required();
        cmd->add_option("--workers", workers, "Worker threads (0 = all available)");
    }
};

/// Runs the pipeline over an image or a frame directory; returns the summary prefix.
std::string run_image_job(const ImageArgs& args, const PixelPipeline& pipeline) {
    const TransformOptions options{args.workers};
    if (std::filesystem::is_directory(args.input)) {
        const std::size_t n = transform_frames(args.input, args.output, pipeline, options);
        return "frames=" + std::to_string(n);
    }
    const RasterImage img = load_image(args.input);
    save_image(transform_image(img, pipeline, options), args.output);
    return "width=" + std::to_string(img.width()) + " height=" + std::to_string(img.height());
}

}  // namespace

std::filesystem::path default_profile_path() {
    if (const char* env = std::getenv("SIGHTGLOW_PROFILE"); env != nullptr && *env != '\0') {
        return env;
    }
    if (const char* xdg = std::getenv("XDG_CONFIG_HOME"); xdg != nullptr && *xdg != '\0') {
        return std::filesystem::path(xdg) / "sightglow" / "profile.json";
    }
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return std::filesystem::path(home) / ".config" / "sightglow" / "profile.json";
    }
    return "sightglow-profile.json";
}

PixelPipeline PanelSpec::pipeline() const {
    switch (kind) {
        case Kind::Raw:
            return {};
        case Kind::Simulate:
            return PixelPipeline::simulation(type, severity);
        case Kind::Daltonize:
            return PixelPipeline::daltonizer(daltonizer);
    }
    return {};
}

std::vector<PanelSpec> parse_panels(const std::string& text) {
    std::vector<PanelSpec> panels;
    if (text.empty() || text.back() == ',') {
        throw PanelSyntaxError("empty panel token in '" + text + "'");
    }
    std::stringstream tokens(text);
    std::string token;
    while (std::getline(tokens, token, ',')) {
        std::vector<std::string> parts;
        std::stringstream fields(token);
        std::string field;
        while (std::getline(fields, field, ':')) {
            parts.push_back(field);
        }
        if (token.empty() || parts.empty() || parts[0].empty()) {
            throw PanelSyntaxError("empty panel token in '" + text + "'");
        }
        if (parts.size() > 3 || token.back() == ':') {
            throw PanelSyntaxError("panel token '" + token + "' takes at most two arguments");
        }
        PanelSpec spec;
        spec.label = token;
        const std::string& name = parts[0];
        if (name == "raw") {
            if (parts.size() != 1) {
                throw PanelSyntaxError("panel token '" + token + "': raw takes no arguments");
            }
        } else if (name == "sim") {
            spec.kind = PanelSpec::Kind::Simulate;
            if (parts.size() >= 2) {
                const auto t = parse_cvd_type(parts[1]);
                if (!t) {
                    throw PanelSyntaxError("panel token '" + token + "': unknown type '" + parts[1] + "'");
                }
                spec.type = *t;
            }
            if (parts.size() == 3) {
                double v = 0.0;
                std::size_t used = 0;
                try {
                    v = std::stod(parts[2], &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != parts[2].size() || used == 0) {
                    throw PanelSyntaxError("panel token '" + token + "': bad severity '" + parts[2] + "'");
                }
                spec.severity = Severity(v);  // range errors surface as ValidationError
            }
        } else if (name == "dalt") {
            spec.kind = PanelSpec::Kind::Daltonize;
            if (parts.size() >= 2) {
                const auto m = parse_daltonize_mode(parts[1]);
                if (!m || *m == DaltonizeMode::Off) {
                    throw PanelSyntaxError("panel token '" + token + "': unknown mode '" + parts[1] +
                                           "' (valid: " + kDaltonizeModes + ")");
                }
                spec.daltonizer.mode = *m;
            }
            if (parts.size() == 3) {
                const auto t = parse_cvd_type(parts[2]);
                if (!t) {
                    throw PanelSyntaxError("panel token '" + token + "': unknown type '" + parts[2] + "'");
                }
                spec.daltonizer.type = *t;
            }
        } else {
            throw PanelSyntaxError("unknown panel token '" + token + "' (valid names: raw, sim, dalt)");
        }
        panels.push_back(spec);
    }
    return panels;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sightglow: colour vision deficiency simulation, daltonization and filter export"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Simulate dichromatic vision on an image");
    ImageArgs sim_args;
    std::string sim_type;
    double sim_severity = 1.0;
    sim_args.add_to(simulate);
    simulate->add_option("--type", sim_type, std::string("CVD type: ") + kTypeNames)->required();
    simulate->add_option("--severity", sim_severity, "Severity in [0, 1]")->capture_default_str();

    // daltonize
    auto* daltonize = app.add_subcommand("daltonize", "Recolour an image for a CVD viewer");
    ImageArgs dal_args;
    std::string dal_mode;
    std::optional<std::string> dal_type;
    double dal_strength = 1.0;
    dal_args.add_to(daltonize);
    daltonize->add_option("--mode", dal_mode, std::string("Mode: ") + kDaltonizeModes)->required();
    daltonize->add_option("--type", dal_type, "CVD type (required for redistribute)");
    daltonize->add_option("--strength", dal_strength, "Redistribute strength in [0, 1]")
        ->capture_default_str();

    // filter
    auto* filter = app.add_subcommand("filter", "Emit an SVG filter, CSS rule or FilterPack JSON");
    std::optional<std::string> filter_profile;
    std::string filter_out;
    std::string filter_selector(kDefaultSelector);
    ProfileFlags filter_flags;
    filter->add_option("--profile", filter_profile, "Stored profile or FilterPack to start from");
    filter->add_option("--out", filter_out, "Output file: *.json (pack), *.svg or *.css")->required();
    filter->add_option("--selector", filter_selector, "CSS selector the rule targets")
        ->capture_default_str();
    filter_flags.add_to(filter);

    // compare
    auto* compare = app.add_subcommand("compare", "Render a raw / simulated / daltonized grid");
    compare->footer(kPanelHelp);
    std::string cmp_input;
    std::string cmp_output;
    std::string cmp_panels;
    std::string cmp_layout = "vertical";
    int cmp_workers = 0;
    std::uint64_t cmp_seed = kSeparabilitySeed;
    compare->add_option("input", cmp_input, "Input image")->required();
    compare->add_option("output", cmp_output, "Output image")->required();
    compare->add_option("--panels", cmp_panels, "Panel list (see below)")->required();
    compare->add_option("--layout", cmp_layout, "vertical|horizontal")->capture_default_str();
    compare->add_option("--workers", cmp_workers, "Worker threads (0 = all available)");
    compare->add_option("--seed", cmp_seed, "Pair sampling seed for the report")->capture_default_str();

    // profile
    auto* profile = app.add_subcommand("profile", "Manage the stored personalization profile");
    profile->require_subcommand(1);
    auto* profile_save = profile->add_subcommand("save", "Store a profile built from flags");
    ProfileFlags save_flags;
    save_flags.add_to(profile_save);
    auto* profile_show = profile->add_subcommand("show", "Print the stored profile as JSON");
    auto* profile_path = profile->add_subcommand("path", "Print the profile location");

    // chart
    auto* chart = app.add_subcommand("chart", "Write the synthetic red/green dot chart");
    std::string chart_out;
    std::size_t chart_w = 256;
    std::size_t chart_h = 256;
    std::uint64_t chart_seed = 1;
    chart->add_option("output", chart_out, "Output image")->required();
    chart->add_option("--width", chart_w)->capture_default_str();
    chart->add_option("--height", chart_h)->capture_default_str();
    chart->add_option("--seed", chart_seed)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (simulate->parsed()) {
            const CvdType t = require_type(sim_type);
            const Severity s(sim_severity);
            const std::string summary = run_image_job(sim_args, PixelPipeline::simulation(t, s));
            out << summary << " type=" << to_string(t) << " severity=" << format_coefficient(s.value())
                << " output=" << sim_args.output << "\n";
            return kOk;
        }

        if (daltonize->parsed()) {
            const auto mode = parse_daltonize_mode(dal_mode);
            if (!mode || *mode == DaltonizeMode::Off) {
                throw UsageError("unknown mode '" + dal_mode + "'; valid modes: " + kDaltonizeModes);
            }
            Daltonizer d{*mode, CvdType::Deuteranopia, dal_strength};
            if (*mode == DaltonizeMode::Redistribute) {
                if (!dal_type) {
                    throw UsageError("--mode redistribute requires --type");
                }
                d.type = require_type(*dal_type);
            }
            const std::string summary = run_image_job(dal_args, PixelPipeline::daltonizer(d));
            out << summary << " mode=" << to_string(d.mode);
            if (d.mode == DaltonizeMode::Redistribute) {
                out << " type=" << to_string(d.type) << " strength=" << format_coefficient(d.strength);
            }
            out << " output=" << dal_args.output << "\n";
            return kOk;
        }

        if (filter->parsed()) {
            VisionProfile p;
            if (filter_profile) {
                p = load_profile_file(*filter_profile, err);
            }
            filter_flags.apply(p);
            std::string ext = std::filesystem::path(filter_out).extension().string();
            std::string format;
            std::string text;
            if (ext == ".json") {
                format = "pack";
                text = serialize_filter_pack(emit_filter_pack(p, filter_selector));
            } else if (ext == ".svg") {
                format = "svg";
                text = emit_svg_filter(build_pipeline_matrix(p), p.filter_id());
            } else if (ext == ".css") {
                format = "css";
                build_pipeline_matrix(p);  // the rule is useless without a fusable filter
                text = emit_css(p.filter_id(), filter_selector);
            } else {
                throw UsageError("--out must end in .json, .svg or .css");
            }
            write_text_file(filter_out, text);
            out << "format=" << format << " filter_id=" << p.filter_id()
                << " mode=" << to_string(p.daltonize_mode()) << " output=" << filter_out << "\n";
            return kOk;
        }

        if (compare->parsed()) {
            std::vector<PanelSpec> specs;
            try {
                specs = parse_panels(cmp_panels);
            } catch (const PanelSyntaxError& e) {
                throw UsageError(e.what());
            }
            if (specs.size() < 2) {
                throw UsageError("--panels needs at least two panels, got " + std::to_string(specs.size()));
            }
            Layout layout;
            if (cmp_layout == "vertical") {
                layout = Layout::Vertical;
            } else if (cmp_layout == "horizontal") {
                layout = Layout::Horizontal;
            } else {
                throw UsageError("--layout must be vertical or horizontal");
            }
            ComparisonGrid grid;
            grid.layout = layout;
            for (const auto& spec : specs) {
                grid.panels.push_back({spec.label, spec.pipeline()});
            }
            for (std::size_t i = 0; i < specs.size(); ++i) {
                for (std::size_t j = i + 1; j < specs.size(); ++j) {
                    if (specs[i].label == specs[j].label) {
                        throw UsageError("duplicate panel '" + specs[i].label + "'");
                    }
                }
            }

            const RasterImage img = load_image(cmp_input);
            const RasterImage grid_img = render_comparison(img, grid, {cmp_workers});
            save_image(grid_img, cmp_output);
            out << "panels=" << specs.size() << " layout=" << cmp_layout
                << " width=" << grid_img.width() << " height=" << grid_img.height()
                << " output=" << cmp_output << "\n";

            const PanelSpec* sim = nullptr;
            const PanelSpec* dalt = nullptr;
            for (const auto& spec : specs) {
                if (spec.kind == PanelSpec::Kind::Simulate && sim == nullptr) sim = &spec;
                if (spec.kind == PanelSpec::Kind::Daltonize && dalt == nullptr) dalt = &spec;
            }
            if (sim != nullptr && dalt != nullptr) {
                const SeparabilityReport r =
                    image_separability(img, sim->type, dalt->daltonizer, cmp_seed);
                out << "separability type=" << to_string(sim->type)
                    << " mode=" << to_string(dalt->daltonizer.mode) << " pairs=" << r.pair_count
                    << " before=" << fixed6(r.mean_before) << " after=" << fixed6(r.mean_after)
                    << "\n";
            }
            return kOk;
        }

        if (profile->parsed()) {
            const std::filesystem::path path = default_profile_path();
            if (profile_path->parsed()) {
                out << "path=" << path.string() << "\n";
                return kOk;
            }
            if (profile_save->parsed()) {
                VisionProfile p;
                save_flags.apply(p);
                write_text_file(path, serialize_profile(p), true);
                out << "saved=" << path.string() << "\n";
                return kOk;
            }
            if (profile_show->parsed()) {
                std::error_code ec;
                if (!std::filesystem::exists(path, ec)) {
                    err << "no profile stored at " << path.string() << "; showing the neutral default\n";
                    out << serialize_profile(VisionProfile{});
                    return kOk;
                }
                out << serialize_profile(load_profile_file(path, err));
                return kOk;
            }
        }

        if (chart->parsed()) {
            const RasterImage img = synthetic_chart(chart_w, chart_h, chart_seed);
            save_image(img, chart_out);
            out << "width=" << img.width() << " height=" << img.height() << " output=" << chart_out
                << "\n";
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnfusableModeError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParameter;
    } catch (const ValidationError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return kInvalidParameter;
    } catch (const StoredProfileError& e) {
        err << "profile error: " << e.what() << "\n";
        return kIo;
    } catch (const ImageError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    }
    err << app.help();
    return kUsage;
}

}  // namespace sightglow::cli
