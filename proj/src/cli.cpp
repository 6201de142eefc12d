#include "autores/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "autores/errors.hpp"
#include "autores/lyapunov.hpp"
#include "autores/serialize.hpp"
#include "autores/simulation.hpp"
#include "autores/transform.hpp"

namespace autores {

namespace {

namespace fs = std::filesystem;

/// Reads one JSON object, records the resolved value of every key (defaults
/// included) and rejects keys it was never asked about.
class Reader {
public:
    Reader(const Json& src, std::string where) : src_(src), where_(std::move(where)) {
        if (!src_.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    double number(const std::string& key, std::optional<double> def = std::nullopt) {
        const Json* v = find(key, def.has_value());
        double x = 0.0;
        if (!v) {
            x = *def;
        } else {
            if (!v->is_number()) throw ConfigError(path(key) + ": expected a number");
            x = v->get<double>();
        }
        resolved_[key] = x;
        return x;
    }

    long integer(const std::string& key, std::optional<long> def = std::nullopt) {
        const Json* v = find(key, def.has_value());
        long x = 0;
        if (!v) {
            x = *def;
        } else {
            if (!v->is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
            x = v->get<long>();
        }
        resolved_[key] = x;
        return x;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t def) {
        const Json* v = find(key, true);
        std::uint64_t x = def;
        if (v) {
            if (!v->is_number_unsigned()) throw ConfigError(path(key) + ": expected a nonnegative integer");
            x = v->get<std::uint64_t>();
        }
        resolved_[key] = x;
        return x;
    }

    std::string text(const std::string& key, std::optional<std::string> def = std::nullopt) {
        const Json* v = find(key, def.has_value());
        std::string x;
        if (!v) {
            x = *def;
        } else {
            if (!v->is_string()) throw ConfigError(path(key) + ": expected a string");
            x = v->get<std::string>();
        }
        resolved_[key] = x;
        return x;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> def) {
        const Json* v = find(key, true);
        std::vector<double> x = std::move(def);
        if (v) {
            if (!v->is_array()) throw ConfigError(path(key) + ": expected an array of numbers");
            x.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw ConfigError(path(key) + ": expected an array of numbers");
                x.push_back(e.get<double>());
            }
        }
        resolved_[key] = x;
        return x;
    }

    bool has(const std::string& key) const { return src_.contains(key); }

    /// Nested object; an absent optional section is read from {} so its defaults are echoed.
    template <class Fn>
    auto section(const std::string& key, bool required, Fn&& fn) {
        const Json* v = find(key, !required);
        static const Json empty = Json::object();
        Reader child(v ? *v : empty, path(key));
        auto result = fn(child);
        child.done();
        resolved_[key] = child.resolved_;
        return result;
    }

    /// Records an already-resolved value for a key the caller parsed itself.
    void record(const std::string& key, Json value) {
        used_.insert(key);
        resolved_[key] = std::move(value);
    }

    const Json* raw(const std::string& key) {
        used_.insert(key);
        return src_.contains(key) ? &src_.at(key) : nullptr;
    }

    void done() const {
        for (auto it = src_.begin(); it != src_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown key");
    }

    [[nodiscard]] std::string path(const std::string& key) const {
        return where_.empty() ? key : where_ + "." + key;
    }
    [[nodiscard]] const Json& resolved() const { return resolved_; }

private:
    const Json* find(const std::string& key, bool optional) {
        used_.insert(key);
        if (src_.contains(key)) return &src_.at(key);
        if (!optional) throw ConfigError("missing required key '" + path(key) + "'");
        return nullptr;
    }

    const Json& src_;
    std::string where_;
    Json resolved_ = Json::object();
    std::set<std::string> used_;
};

ModelParams read_model(Reader& top) {
    return top.section("model", true, [](Reader& r) {
        ModelParams p;
        p.lambda = r.number("lambda");
        p.delta = r.number("delta");
        p.f = r.number("f");
        try {
            p.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
        return p;
    });
}

IntegratorConfig read_integrator(Reader& top) {
    return top.section("integrator", false, [](Reader& r) {
        IntegratorConfig c;
        c.method = integrator_method_from_string(r.text("method", std::string(to_string(c.method))));
        c.abs_tol = r.number("abs_tol", c.abs_tol);
        c.rel_tol = r.number("rel_tol", c.rel_tol);
        c.h_init = r.number("h_init", c.h_init);
        c.h_max = r.number("h_max", c.h_max);
        c.max_steps = r.integer("max_steps", c.max_steps);
        c.validate();
        return c;
    });
}

Distribution read_distribution(Reader& r) {
    const std::string kind = r.text("kind");
    Distribution d;
    if (kind == "uniform") d = Distribution::uniform(r.number("lo"), r.number("hi"));
    else if (kind == "gaussian") d = Distribution::gaussian(r.number("mean"), r.number("sd"));
    else if (kind == "constant") d = Distribution::constant(r.number("value"));
    else if (kind == "two_point") d = Distribution::two_point(r.number("p"), r.number("v1"), r.number("v2"));
    else throw ConfigError(r.path("kind") + ": unknown distribution '" + kind + "'");
    d.validate();
    return d;
}

DeviationWeight read_weight(Reader& r) {
    const std::string w = r.text("deviation_weight", "tau");
    if (w == "tau") return DeviationWeight::tau;
    if (w == "lambda_tau") return DeviationWeight::lambda_tau;
    throw ConfigError(r.path("deviation_weight") + ": expected 'tau' or 'lambda_tau'");
}

/// Random or deterministic perturbation description shared by simulate and montecarlo.
struct PerturbationChoice {
    std::string type = "none";
    double mu = 0.0;
    JumpTrainSpec train;
    Distribution omega = Distribution::constant(1.0);
    Distribution jump = Distribution::constant(0.0);

    [[nodiscard]] bool is_random() const { return type == "jump_train" || type == "single_jump"; }

    [[nodiscard]] RandomPertPath path(std::uint64_t seed, double mu_value) const {
        if (type == "jump_train") {
            JumpTrainSpec s = train;
            s.mu = mu_value;
            return sample_jump_train(s, seed);
        }
        if (type == "single_jump") return sample_single_jump(omega, jump, mu_value, seed);
        return RandomPertPath::zero(mu_value);
    }

    [[nodiscard]] double kappa0() const {
        if (type == "jump_train") return ClassSpec{0.0, 0.0, 1.0}.kappa0();
        if (type == "single_jump") return ClassSpec{0.0, 1.0, 1.0}.kappa0();
        return std::numeric_limits<double>::infinity();
    }
};

PerturbationChoice read_perturbation(Reader& parent, bool with_mu, const std::set<std::string>& allowed) {
    return parent.section("perturbation", false, [&](Reader& r) {
        PerturbationChoice c;
        c.type = r.text("type", "none");
        if (!allowed.count(c.type)) throw ConfigError(r.path("type") + ": unsupported perturbation '" + c.type + "'");
        if (with_mu && c.type != "none") c.mu = r.number("mu");
        if (c.type == "jump_train") {
            c.train.N = static_cast<int>(r.integer("N", 10));
            c.train.jump = r.section("jump", true, read_distribution);
            c.train.mu = with_mu ? c.mu : 0.5;
        } else if (c.type == "single_jump") {
            c.omega = r.section("omega", true, read_distribution);
            c.jump = r.section("jump", true, read_distribution);
        }
        return c;
    });
}

struct RunContext {
    std::string command;
    fs::path out_dir;
    int workers = 1;
    std::optional<std::uint64_t> seed_override;
    std::ostream& out;
};

struct RunResult {
    Json resolved;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> files;  ///< (name, content)
};

std::uint64_t read_seed(Reader& top, const RunContext& ctx) {
    std::uint64_t seed = top.unsigned_integer("seed", 0);
    if (ctx.seed_override) {
        seed = *ctx.seed_override;
        top.record("seed", seed);
    }
    return seed;
}

void read_header(Reader& top) {
    const long v = top.integer("schema_version", 1);
    if (v != 1) throw ConfigError("schema_version: only version 1 is supported");
    top.text("output_dir", "autores_out");
}

// ---------------------------------------------------------------------------

RunResult cmd_simulate(const Json& cfg, const RunContext& ctx) {
    Reader top(cfg, "");
    read_header(top);
    RunResult res;
    res.seed = read_seed(top, ctx);
    const ModelParams params = read_model(top);
    const IntegratorConfig integ = read_integrator(top);

    struct Sim {
        double r0, psi0, tau0, tau1, output_dt;
        std::optional<double> epsilon;
        int order;
        DeviationWeight weight;
        PerturbationChoice pert;
    };
    const Sim s = top.section("simulate", true, [&](Reader& r) {
        Sim x{};
        r.section("initial", true, [&](Reader& i) {
            x.r0 = i.number("r");
            x.psi0 = i.number("psi");
            return 0;
        });
        x.tau0 = r.number("tau0", 0.01);
        x.tau1 = r.number("tau1", 100.0);
        x.output_dt = r.number("output_dt", 0.0);
        if (r.has("epsilon")) x.epsilon = r.number("epsilon");
        x.order = static_cast<int>(r.integer("reference_order", 2));
        x.weight = read_weight(r);
        x.pert = read_perturbation(r, true, {"none", "example1", "jump_train", "single_jump"});
        return x;
    });
    top.done();
    if (!(s.tau0 > 0.0) || !(s.tau1 > s.tau0)) throw ConfigError("simulate: need 0 < tau0 < tau1");
    if (s.output_dt < 0.0) throw ConfigError("simulate: output_dt must be nonnegative");

    PiecewiseField field;
    if (s.pert.type == "example1") field = deterministic_field(params, make_example1(), s.pert.mu);
    else if (s.pert.is_random()) field = random_field(params, s.pert.path(substream_seed(res.seed, 0), s.pert.mu));
    else field = unperturbed_field(params);

    const bool has_ref = params.delta > 0.0 && params.delta < 1.0;
    std::optional<SeriesCoeffs> ref;
    if (has_ref) ref = extend_coeffs(params, Branch::minus, s.order);
    if (s.epsilon && !ref) throw ConfigError("simulate: epsilon needs a reference solution (0 < delta < 1)");

    std::vector<double> times;
    std::vector<Vec2> states;
    TrajectoryStatus status = TrajectoryStatus::completed;
    if (s.epsilon) {
        const Trajectory t = integrate_until_escape(field, {s.r0, s.psi0}, s.tau0, s.tau1, *s.epsilon, *ref, integ);
        times = t.times;
        for (const auto& st : t.states) states.push_back(st.vec());
        status = t.status;
    } else {
        std::vector<double> grid;
        if (s.output_dt > 0.0) {
            for (long i = 0;; ++i) {
                const double t = s.tau0 + static_cast<double>(i) * s.output_dt;
                if (t > s.tau1 * (1.0 + 1e-15)) break;
                grid.push_back(std::min(t, s.tau1));
            }
            if (grid.back() < s.tau1) grid.push_back(s.tau1);
        }
        const auto t = integrate(field, {s.r0, s.psi0}, s.tau0, s.tau1, integ, grid);
        times = t.times;
        states = t.states;
        status = t.status;
    }

    CsvTable csv({"tau", "r", "psi", "deviation_norm", "status"});
    const std::string st(to_string(status));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dev = ref ? deviation_norm(PhaseState::from(states[i]), times[i], *ref, s.weight)
                               : std::numeric_limits<double>::quiet_NaN();
        csv.add_row({format_double(times[i]), format_double(states[i][0]), format_double(states[i][1]),
                     format_double(dev), st});
    }
    res.files.emplace_back("trajectory.csv", csv.str());
    res.resolved = top.resolved();
    const double ratio = states.back()[0] / (params.lambda * times.back());
    ctx.out << "simulate: " << times.size() << " rows, status " << st << ", final r/(lambda tau) = "
            << format_double(ratio) << "\n";
    return res;
}

RunResult cmd_asymptotics(const Json& cfg, const RunContext& ctx) {
    Reader top(cfg, "");
    read_header(top);
    RunResult res;
    res.seed = read_seed(top, ctx);
    const ModelParams params = read_model(top);
    struct Asy {
        Branch branch;
        int order;
        std::vector<double> taus;
    };
    const Asy a = top.section("asymptotics", false, [](Reader& r) {
        Asy x;
        x.branch = branch_from_string(r.text("branch", "minus"));
        x.order = static_cast<int>(r.integer("order", 3));
        x.taus = r.numbers("taus", {1e2, 1e3, 1e4});
        return x;
    });
    top.done();

    const SeriesCoeffs series = extend_coeffs(params, a.branch, a.order);
    const LeadingCoeffs lead = leading_coeffs(params, a.branch);
    Json j = to_json(series);
    j["leading"] = {{"psi0", lead.psi0}, {"r0", lead.r0}, {"psi1", lead.psi1}, {"r1", lead.r1}};
    res.files.emplace_back("coefficients.json", dump_json(j));

    CsvTable csv({"tau", "residual_r", "residual_psi"});
    for (double tau : a.taus) {
        const Vec2 rr = residual(series, tau);
        csv.add_row({format_double(tau), format_double(rr[0]), format_double(rr[1])});
    }
    res.files.emplace_back("residuals.csv", csv.str());
    res.resolved = top.resolved();
    ctx.out << "asymptotics: branch " << to_string(a.branch) << ", order " << series.order()
            << (series.conditioning_warning() ? " (conditioning warning)" : "") << "\n";
    return res;
}

RunResult cmd_certify(const Json& cfg, const RunContext& ctx) {
    Reader top(cfg, "");
    read_header(top);
    RunResult res;
    res.seed = read_seed(top, ctx);
    const ModelParams params = read_model(top);
    struct Cert {
        DomainBox box;
        GridSpec grid;
        int order;
    };
    const Cert c = top.section("certify", false, [](Reader& r) {
        Cert x;
        x.box = r.section("box", false, [](Reader& b) {
            DomainBox d;
            d.rho_max = b.number("rho_max", d.rho_max);
            d.tau_min = b.number("tau_min", d.tau_min);
            d.tau_max = b.number("tau_max", d.tau_max);
            return d;
        });
        x.grid = r.section("grid", false, [](Reader& g) {
            GridSpec s;
            s.angles = static_cast<int>(g.integer("angles", s.angles));
            s.radii = static_cast<int>(g.integer("radii", s.radii));
            s.taus = static_cast<int>(g.integer("taus", s.taus));
            s.max_rounds = static_cast<int>(g.integer("max_rounds", s.max_rounds));
            return s;
        });
        x.order = static_cast<int>(r.integer("reference_order", 2));
        return x;
    });
    top.done();

    const CertificateReport rep = certify_domain(params, c.box, c.grid, ctx.workers, c.order);
    Json j = to_json(rep);
    j["classification"] = to_json(classify_branch(params, Branch::minus));
    res.files.emplace_back("certificate.json", dump_json(j));
    res.resolved = top.resolved();
    ctx.out << "certify: " << (rep.certified ? "certified" : "not certified") << "; " << rep.diagnosis << "\n";
    return res;
}

RunResult cmd_basin(const Json& cfg, const RunContext& ctx) {
    Reader top(cfg, "");
    read_header(top);
    RunResult res;
    res.seed = read_seed(top, ctx);
    const ModelParams params = read_model(top);
    const IntegratorConfig integ = read_integrator(top);
    struct Bas {
        BasinGrid grid;
        double tau_max;
        CaptureCriterion crit;
    };
    const Bas b = top.section("basin", false, [](Reader& r) {
        Bas x;
        const auto rr = r.numbers("r_range", {x.grid.r_lo, x.grid.r_hi});
        const auto pr = r.numbers("psi_range", {x.grid.psi_lo, x.grid.psi_hi});
        if (rr.size() != 2 || pr.size() != 2) throw ConfigError("basin: ranges must have two entries");
        x.grid.r_lo = rr[0];
        x.grid.r_hi = rr[1];
        x.grid.psi_lo = pr[0];
        x.grid.psi_hi = pr[1];
        x.grid.r_count = static_cast<int>(r.integer("r_count", x.grid.r_count));
        x.grid.psi_count = static_cast<int>(r.integer("psi_count", x.grid.psi_count));
        if (const Json* extra = r.raw("extra_points")) {
            Json echo = Json::array();
            if (!extra->is_array()) throw ConfigError("basin.extra_points: expected [[r, psi], ...]");
            for (const auto& p : *extra) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    throw ConfigError("basin.extra_points: expected [[r, psi], ...]");
                x.grid.extra_points.emplace_back(p[0].get<double>(), p[1].get<double>());
                echo.push_back({p[0].get<double>(), p[1].get<double>()});
            }
            r.record("extra_points", echo);
        } else {
            r.record("extra_points", Json::array());
        }
        x.tau_max = r.number("tau_max", 100.0);
        x.crit = r.section("capture", false, [](Reader& c) {
            CaptureCriterion k;
            k.ratio_lo = c.number("ratio_lo", k.ratio_lo);
            k.ratio_hi = c.number("ratio_hi", k.ratio_hi);
            k.phase_window = c.number("phase_window", k.phase_window);
            k.tau_init = c.number("tau_init", k.tau_init);
            return k;
        });
        return x;
    });
    top.done();
    if (b.grid.r_count < 1 || b.grid.psi_count < 1) throw ConfigError("basin: counts must be positive");

    const auto cells = basin_scan(params, b.grid, b.tau_max, b.crit, integ, ctx.workers);
    CsvTable csv({"r0", "psi0", "class", "r_final"});
    long captured = 0;
    for (const BasinCell& c : cells) {
        csv.add_row({format_double(c.r0), format_double(c.psi0), std::string(to_string(c.cls)),
                     format_double(c.r_final)});
        captured += c.cls == BasinClass::captured;
    }
    res.files.emplace_back("basin.csv", csv.str());
    res.resolved = top.resolved();
    ctx.out << "basin: " << captured << " of " << cells.size() << " initial points captured\n";
    return res;
}

RunResult cmd_montecarlo(const Json& cfg, const RunContext& ctx) {
    Reader top(cfg, "");
    read_header(top);
    RunResult res;
    res.seed = read_seed(top, ctx);
    MonteCarloConfig mc;
    mc.seed = res.seed;
    mc.params = read_model(top);
    mc.integrator = read_integrator(top);
    const PerturbationChoice pert = top.section("montecarlo", false, [&](Reader& r) {
        mc.n_trials = r.integer("n_trials", mc.n_trials);
        mc.mu = r.number("mu", mc.mu);
        mc.kappa = r.number("kappa", mc.kappa);
        mc.epsilon = r.number("epsilon", mc.epsilon);
        mc.tau0 = r.number("tau0", mc.tau0);
        mc.reference_order = static_cast<int>(r.integer("reference_order", mc.reference_order));
        mc.initial = r.section("initial", false, [](Reader& i) {
            return TransformedState{i.number("R", 0.0), i.number("Psi", 0.0)};
        });
        mc.weight = read_weight(r);
        return read_perturbation(r, false, {"none", "jump_train", "single_jump"});
    });
    top.done();
    mc.validate();

    const MonteCarloReport rep = monte_carlo_escape(
        mc, [&pert](std::uint64_t seed, double mu) { return pert.path(seed, mu); }, pert.kappa0(), ctx.workers);
    Json j;
    j["config"] = top.resolved();
    j["results"] = to_json(rep);
    res.files.emplace_back("montecarlo.json", dump_json(j));
    res.resolved = top.resolved();
    ctx.out << "montecarlo: escape_prob " << format_double(rep.escape_prob) << " (" << rep.n_escaped << "/"
            << rep.n_trials << "), failed " << rep.n_failed << "\n";
    return res;
}

RunResult cmd_duffing(const Json& cfg, const RunContext& ctx) {
    Reader top(cfg, "");
    read_header(top);
    RunResult res;
    res.seed = read_seed(top, ctx);
    const IntegratorConfig integ = read_integrator(top);
    struct Duf {
        DuffingParams dp;
        double x0, v0, horizon_t, sample_dt;
    };
    const Duf d = top.section("duffing", true, [](Reader& r) {
        Duf x{};
        x.dp.beta = r.number("beta", 0.0);
        x.dp.gamma = r.number("gamma", 1.5);
        x.dp.eps = r.number("eps", 0.01);
        x.dp.alpha = r.number("alpha", x.dp.eps * x.dp.eps / 8.0);
        x.x0 = r.number("x0");
        x.v0 = r.number("v0", 0.0);
        x.horizon_t = r.number("horizon_t", 0.2 / (x.dp.eps * x.dp.eps));
        x.sample_dt = r.number("sample_dt", 0.05);
        return x;
    });
    top.done();
    try {
        d.dp.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }

    const DuffingComparison cmp = duffing_compare(d.dp, d.horizon_t, integ, d.x0, d.v0, d.sample_dt);
    res.files.emplace_back("duffing.json", dump_json(to_json(cmp)));
    CsvTable csv({"t", "x", "v", "amplitude", "smoothed", "averaged_envelope"});
    for (const DuffingSample& s : cmp.samples)
        csv.add_row({format_double(s.t), format_double(s.x), format_double(s.v), format_double(s.amplitude),
                     format_double(s.smoothed), format_double(s.averaged_envelope)});
    res.files.emplace_back("envelope.csv", csv.str());
    res.resolved = top.resolved();
    ctx.out << "duffing: sup relative envelope error " << format_double(cmp.sup_rel_error) << ", growth "
            << (cmp.oscillator_growth ? "yes" : "no") << "/" << (cmp.averaged_growth ? "yes" : "no") << "\n";
    return res;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Autoresonance experiments: asymptotics, Lyapunov certification, simulation"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_flag;
    int workers = 1;
    std::optional<std::uint64_t> seed;

    const std::vector<std::string> commands{"simulate", "asymptotics", "certify", "basin", "montecarlo", "duffing"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_flag, "output directory (overrides AUTORES_OUT_DIR and the config)");
        sub->add_option("--workers", workers, "worker threads; results do not depend on it")
            ->check(CLI::Range(1, 1024));
        sub->add_option("--seed", seed, "master seed (overrides the config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Json cfg;
        try {
            cfg = Json::parse(read_text_file(config_path));
        } catch (const Json::parse_error& e) {
            throw ConfigError(std::string("cannot parse ") + config_path + ": " + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");

        fs::path out_dir = "autores_out";
        if (cfg.contains("output_dir") && cfg["output_dir"].is_string()) out_dir = cfg["output_dir"].get<std::string>();
        if (const char* env = std::getenv("AUTORES_OUT_DIR"); env && *env) out_dir = env;
        if (!out_flag.empty()) out_dir = out_flag;

        RunContext ctx{command, out_dir, workers, seed, out};
        RunResult res;
        if (command == "simulate") res = cmd_simulate(cfg, ctx);
        else if (command == "asymptotics") res = cmd_asymptotics(cfg, ctx);
        else if (command == "certify") res = cmd_certify(cfg, ctx);
        else if (command == "basin") res = cmd_basin(cfg, ctx);
        else if (command == "montecarlo") res = cmd_montecarlo(cfg, ctx);
        else res = cmd_duffing(cfg, ctx);

        Json manifest;
        manifest["tool"] = "autores";
        manifest["version"] = kToolVersion;
        manifest["command"] = command;
        manifest["seed"] = res.seed;
        manifest["config"] = res.resolved;
        Json names = Json::array();
        for (const auto& f : res.files) names.push_back(f.first);
        manifest["outputs"] = names;

        for (const auto& [name, content] : res.files) write_text_file(out_dir / name, content);
        write_text_file(out_dir / "manifest.json", dump_json(manifest));
        out << "wrote " << res.files.size() + 1 << " files to " << out_dir.string() << "\n";
        return kExitOk;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DegenerateParameters& e) {
        err << "degenerate parameters: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const StiffnessError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const FitError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace autores
