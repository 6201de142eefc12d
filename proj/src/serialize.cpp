#include "autores/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "autores/errors.hpp"

namespace autores {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw InvalidInput("CsvTable: empty header");
    add_row(header);
    rows_ = 0;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw InvalidInput("CsvTable: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\"\n") != std::string::npos)
            throw InvalidInput("CsvTable: cell contains a separator");
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
}

std::string CsvTable::str() const { return text_; }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const ModelParams& p) { return {{"lambda", p.lambda}, {"delta", p.delta}, {"f", p.f}}; }

Json to_json(const IntegratorConfig& c) {
    return {{"method", std::string(to_string(c.method))},
            {"abs_tol", c.abs_tol},
            {"rel_tol", c.rel_tol},
            {"h_init", c.h_init},
            {"h_max", c.h_max},
            {"max_steps", c.max_steps}};
}

Json to_json(const Distribution& d) {
    switch (d.kind) {
        case Distribution::Kind::uniform: return {{"kind", "uniform"}, {"lo", d.p0}, {"hi", d.p1}};
        case Distribution::Kind::gaussian: return {{"kind", "gaussian"}, {"mean", d.p0}, {"sd", d.p1}};
        case Distribution::Kind::constant: return {{"kind", "constant"}, {"value", d.p0}};
        case Distribution::Kind::two_point:
            return {{"kind", "two_point"}, {"p", d.p0}, {"v1", d.p1}, {"v2", d.p2}};
    }
    return {};
}

Json to_json(const SeriesCoeffs& s) {
    return {{"branch", std::string(to_string(s.branch()))},
            {"order", s.order()},
            {"r_coeffs", s.r_coeffs()},
            {"psi_coeffs", s.psi_coeffs()},
            {"params", to_json(s.params())},
            {"conditioning_warning", s.conditioning_warning()}};
}

SeriesCoeffs series_from_json(const Json& j) {
    try {
        ModelParams p;
        p.lambda = j.at("params").at("lambda").get<double>();
        p.delta = j.at("params").at("delta").get<double>();
        p.f = j.at("params").at("f").get<double>();
        auto r = j.at("r_coeffs").get<std::vector<double>>();
        auto psi = j.at("psi_coeffs").get<std::vector<double>>();
        SeriesCoeffs s(branch_from_string(j.at("branch").get<std::string>()), p, std::move(r), std::move(psi));
        if (s.order() != j.at("order").get<int>()) throw ConfigError("series JSON: order does not match arrays");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("series JSON: ") + e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("series JSON: ") + e.what());
    }
}

Json to_json(const CertificateReport& r) {
    Json j{{"certified", r.certified},
           {"rho0", r.rho0},
           {"tau0", r.tau0},
           {"tau_max", r.tau_max},
           {"ell", r.ell},
           {"decay_margin", r.decay_margin},
           {"sandwich_margins", {r.sandwich_lower, r.sandwich_upper}},
           {"samples", r.samples},
           {"rounds", r.rounds},
           {"grid",
            {{"angles", r.grid.angles}, {"radii", r.grid.radii}, {"taus", r.grid.taus},
             {"max_rounds", r.grid.max_rounds}}},
           {"method", r.method},
           {"diagnosis", r.diagnosis}};
    if (r.witness)
        j["witness"] = {{"R", r.witness->R}, {"Psi", r.witness->Psi}, {"tau", r.witness->tau},
                        {"dV_dtau", r.witness->value}};
    else
        j["witness"] = nullptr;
    return j;
}

Json to_json(const BranchClassification& c) {
    return {{"stability", std::string(to_string(c.stability))},
            {"tau_probe", c.tau_probe},
            {"eigenvalues",
             {{{"re", c.eigen_a.real()}, {"im", c.eigen_a.imag()}},
              {{"re", c.eigen_b.real()}, {"im", c.eigen_b.imag()}}}}};
}

Json to_json(const MonteCarloReport& r) {
    Json trials = Json::array();
    for (const TrialOutcome& t : r.trials) {
        Json e{{"seed", t.seed}, {"status", std::string(to_string(t.status))}};
        e["escape_time"] = t.escape_time ? Json(*t.escape_time) : Json(nullptr);
        e["max_deviation"] = t.max_deviation;
        trials.push_back(std::move(e));
    }
    return {{"n_trials", r.n_trials},
            {"n_escaped", r.n_escaped},
            {"n_failed", r.n_failed},
            {"escape_prob", r.escape_prob},
            {"wilson_ci_95", {r.wilson_ci_95.first, r.wilson_ci_95.second}},
            {"horizon", r.horizon},
            {"trials", std::move(trials)}};
}

Json to_json(const NuEstimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}, {"h", e.h},
            {"within_class", e.within_class}};
}

Json to_json(const DuffingComparison& d) {
    return {{"averaged_params", to_json(d.averaged_params)},
            {"r0", d.r0},
            {"psi0", d.psi0},
            {"horizon_t", d.horizon_t},
            {"sup_rel_error", d.sup_rel_error},
            {"initial_amplitude", d.initial_amplitude},
            {"final_amplitude", d.final_amplitude},
            {"final_envelope", d.final_envelope},
            {"oscillator_growth", d.oscillator_growth},
            {"averaged_growth", d.averaged_growth},
            {"samples", d.samples.size()}};
}

}  // namespace autores
