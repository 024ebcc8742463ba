#include "edsys/io.hpp"

#include "edsys/assembly.hpp"
#include "edsys/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace edsys {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

bool parse_count(std::string_view text, std::uint64_t& out) {
    text = trim(text);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::vector<std::string_view> split_commas(std::string_view text) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(',');
        parts.push_back(trim(text.substr(0, pos)));
        if (pos == std::string_view::npos) {
            break;
        }
        text.remove_prefix(pos + 1);
    }
    return parts;
}

class LineError : public ValidationError {
public:
    explicit LineError(const std::string& what) : ValidationError(what) {}
};

std::string format_sig9(double v) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.9g", v);
    return buf.data();
}

// Applies one key/value pair. Throws LineError for syntax, ValidationError for ranges.
void apply_key(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    auto number = [&](double& slot) {
        if (!parse_number(value, slot)) {
            throw LineError("cannot parse number for '" + std::string(key) + "'");
        }
    };
    auto count = [&](auto& slot) {
        std::uint64_t v = 0;
        if (!parse_count(value, v)) {
            throw LineError("cannot parse non-negative integer for '" + std::string(key) + "'");
        }
        slot = static_cast<std::remove_reference_t<decltype(slot)>>(v);
    };
    auto& m = cfg.model;
    auto& s = cfg.solver;
    if (key == "nx") count(cfg.nx);
    else if (key == "ny") count(cfg.ny);
    else if (key == "tau") number(s.tau);
    else if (key == "tol") number(s.tol);
    else if (key == "tol_s") number(s.tol_s);
    else if (key == "eps") number(m.eps);
    else if (key == "c1") number(m.c1);
    else if (key == "c2") number(m.c2);
    else if (key == "alpha1") number(m.alpha[0]);
    else if (key == "alpha2") number(m.alpha[1]);
    else if (key == "beta11") number(m.beta[0][0]);
    else if (key == "beta12") number(m.beta[0][1]);
    else if (key == "beta21") number(m.beta[1][0]);
    else if (key == "beta22") number(m.beta[1][1]);
    else if (key == "u10") number(cfg.u10);
    else if (key == "u20") number(cfg.u20);
    else if (key == "t_end") number(s.t_end);
    else if (key == "max_picard") count(s.max_picard);
    else if (key == "max_steps") count(s.max_steps);
    else if (key == "seed") count(cfg.seed);
    else if (key == "bc") {
        try {
            s.bc_mode = parse_bc(value);
        } catch (const ValidationError& e) {
            throw LineError(e.what());
        }
    } else if (key == "convention") {
        if (value == "logistic") m.convention = ReactionConvention::Logistic;
        else if (value == "literal") m.convention = ReactionConvention::Literal;
        else throw LineError("'convention' must be logistic or literal");
    } else if (key == "run_mode") {
        if (value == "stationary") s.run_mode = RunMode::ToStationary;
        else if (value == "horizon") s.run_mode = RunMode::FixedHorizon;
        else throw LineError("'run_mode' must be stationary or horizon");
    } else if (key == "sweep_eps") {
        if (!cfg.sweep) cfg.sweep.emplace();
        try {
            cfg.sweep->eps_list = parse_double_list(value);
        } catch (const ValidationError& e) {
            throw LineError(e.what());
        }
    } else if (key == "sweep_bc") {
        if (!cfg.sweep) cfg.sweep.emplace();
        try {
            cfg.sweep->bc_list = parse_bc_list(value);
        } catch (const ValidationError& e) {
            throw LineError(e.what());
        }
    } else {
        throw LineError("unknown key '" + std::string(key) + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (auto part : split_commas(text)) {
        double v = 0.0;
        if (!parse_number(part, v)) {
            throw ValidationError("cannot parse number '" + std::string(part) + "' in list");
        }
        out.push_back(v);
    }
    return out;
}

BcMode parse_bc(std::string_view text) {
    text = trim(text);
    if (text == "dirichlet") return BcMode::Dirichlet;
    if (text == "mixed") return BcMode::Mixed;
    throw ValidationError("boundary mode must be dirichlet or mixed, got '" + std::string(text) + "'");
}

std::vector<BcMode> parse_bc_list(std::string_view text) {
    std::vector<BcMode> out;
    for (auto part : split_commas(text)) {
        out.push_back(parse_bc(part));
    }
    return out;
}

ExperimentConfig load_config(std::string_view text) {
    ExperimentConfig cfg = experiment_preset(2);
    std::map<std::string, std::size_t, std::less<>> seen;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        auto fail = [&](const std::string& what) {
            throw ValidationError("config line " + std::to_string(line_no) + ": " + what);
        };
        if (eq == std::string_view::npos) {
            fail("expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail("expected 'key = value'");
        }
        if (const auto it = seen.find(key); it != seen.end()) {
            fail("duplicate key '" + std::string(key) + "' (first set on line " +
                 std::to_string(it->second) + ")");
        }
        seen.emplace(std::string(key), line_no);
        try {
            apply_key(cfg, key, value);
        } catch (const LineError& e) {
            fail(e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    const auto& m = cfg.model;
    const auto& s = cfg.solver;
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& v) { out << key << " = " << v << '\n'; };
    kv("nx", std::to_string(cfg.nx));
    kv("ny", std::to_string(cfg.ny));
    kv("tau", format_double(s.tau));
    kv("tol", format_double(s.tol));
    kv("tol_s", format_double(s.tol_s));
    kv("eps", format_double(m.eps));
    kv("c1", format_double(m.c1));
    kv("c2", format_double(m.c2));
    kv("alpha1", format_double(m.alpha[0]));
    kv("alpha2", format_double(m.alpha[1]));
    kv("beta11", format_double(m.beta[0][0]));
    kv("beta12", format_double(m.beta[0][1]));
    kv("beta21", format_double(m.beta[1][0]));
    kv("beta22", format_double(m.beta[1][1]));
    kv("bc", to_string(s.bc_mode));
    kv("convention", m.convention == ReactionConvention::Logistic ? "logistic" : "literal");
    kv("u10", format_double(cfg.u10));
    kv("u20", format_double(cfg.u20));
    kv("run_mode", s.run_mode == RunMode::ToStationary ? "stationary" : "horizon");
    kv("t_end", format_double(s.t_end));
    kv("max_picard", std::to_string(s.max_picard));
    kv("max_steps", std::to_string(s.max_steps));
    kv("seed", std::to_string(cfg.seed));
    if (cfg.sweep) {
        std::string eps;
        for (std::size_t k = 0; k < cfg.sweep->eps_list.size(); ++k) {
            eps += (k ? "," : "") + format_double(cfg.sweep->eps_list[k]);
        }
        std::string bc;
        for (std::size_t k = 0; k < cfg.sweep->bc_list.size(); ++k) {
            bc += (k ? "," : "") + to_string(cfg.sweep->bc_list[k]);
        }
        kv("sweep_eps", eps);
        kv("sweep_bc", bc);
    }
    return out.str();
}

std::string format_snapshot(const FieldPair& state, const Mesh& mesh) {
    if (state.size() != mesh.num_nodes()) {
        throw ValidationError("snapshot: state does not match mesh");
    }
    std::string out = "x1,x2,u1,u2\n";
    out.reserve(48 * mesh.num_nodes());
    for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
        const Point& p = mesh.node(a);
        out += format_sig9(p.x1);
        out += ',';
        out += format_sig9(p.x2);
        out += ',';
        out += format_sig9(state.u1[a]);
        out += ',';
        out += format_sig9(state.u2[a]);
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SolverError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw SolverError("write failed for " + path.string());
    }
}

void write_snapshot(const FieldPair& state, const Mesh& mesh, const std::filesystem::path& path) {
    write_text(path, format_snapshot(state, mesh));
}

std::vector<SnapshotRow> read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open snapshot " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x1,x2,u1,u2") {
        throw ValidationError("snapshot " + path.string() + ": missing header");
    }
    std::vector<SnapshotRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto parts = parse_double_list(line);
        if (parts.size() != 4) {
            throw ValidationError("snapshot " + path.string() + ": expected 4 columns");
        }
        rows.push_back({parts[0], parts[1], parts[2], parts[3]});
    }
    return rows;
}

RunSummary summarize(std::string experiment, const ExperimentConfig& cfg, const RunResult& result,
                     const Mesh& mesh, double wall_time_s) {
    const LumpedMass mass = assemble_lumped_mass(mesh);
    auto stats = [&mass](const std::vector<double>& u) {
        const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
        return FieldStats{*lo, *hi, mass.inner(u, std::vector<double>(u.size(), 1.0))};
    };
    RunSummary s;
    s.experiment = std::move(experiment);
    s.config = cfg;
    s.steps = result.steps;
    s.total_picard = result.total_picard;
    s.wall_time_s = wall_time_s;
    s.final_stationary_metric = result.final_stationary_metric;
    s.u1 = stats(result.final_state.u1);
    s.u2 = stats(result.final_state.u2);
    return s;
}

std::string format_summary(const RunSummary& s) {
    std::ostringstream out;
    out << "experiment = " << s.experiment << '\n';
    out << "steps = " << s.steps << '\n';
    out << "total_picard = " << s.total_picard << '\n';
    out << "wall_time_s = " << format_double(s.wall_time_s) << '\n';
    out << "final_stationary_metric = " << format_double(s.final_stationary_metric) << '\n';
    out << "u1_min = " << format_double(s.u1.min) << '\n';
    out << "u1_max = " << format_double(s.u1.max) << '\n';
    out << "u1_mass = " << format_double(s.u1.mass) << '\n';
    out << "u2_min = " << format_double(s.u2.min) << '\n';
    out << "u2_max = " << format_double(s.u2.max) << '\n';
    out << "u2_mass = " << format_double(s.u2.mass) << '\n';
    std::istringstream cfg(serialize_config(s.config));
    for (std::string line; std::getline(cfg, line);) {
        out << "config." << line << '\n';
    }
    return out.str();
}

void write_summary(const RunSummary& summary, const std::filesystem::path& path) {
    write_text(path, format_summary(summary));
}

ExperimentConfig config_from_summary(std::string_view text) {
    std::string echoed;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.starts_with("config.")) {
            echoed.append(line.substr(7));
            echoed += '\n';
        }
    }
    return load_config(echoed);
}

}  // namespace edsys
