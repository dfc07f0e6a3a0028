#include "fxmjd/config.hpp"

#include <fstream>

#include <json.hpp>

#include "fxmjd/estimator.hpp"

namespace fxmjd {

using nlohmann::json;

JumpSpec RunConfig::jump_spec() const { return jump_spec_with(jump_theta); }

JumpSpec RunConfig::jump_spec_with(double theta) const {
    if (jump_kind == "exponential") return JumpSpec::exponential(theta);
    if (jump_kind == "point_mass") return JumpSpec::point_mass(theta);
    throw ValidationError("unknown jump kind: " + jump_kind);
}

void RunConfig::validate() const {
    regimes.validate();
    rate.validate();
    if (rate.size() != regimes.size())
        throw ValidationError("config: rate matrix size does not match regime count");
    if (initial_state < 0 || initial_state >= regimes.size())
        throw ValidationError("config: initial_state out of range");
    if (!(s0 > 0.0)) throw ValidationError("config: s0 must be > 0");
    for (double k : strikes)
        if (!(k > 0.0)) throw ValidationError("config: strikes must be > 0");
    for (double t : maturities)
        if (!(t > 0.0)) throw ValidationError("config: maturities must be > 0");
    if (n_paths < 1) throw ValidationError("config: mc.paths must be >= 1");
    jump_spec();  // kind/parameter sanity
    if (esscher_override) {
        if (static_cast<int>(esscher_override->theta_c.size()) != regimes.size() ||
            static_cast<int>(esscher_override->theta_j.size()) != regimes.size())
            throw ValidationError("config: esscher_override dimension mismatch");
    }
}

namespace {

Eigen::MatrixXd parse_matrix(const json& rows) {
    const auto n = rows.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw ValidationError("config: matrix is not square");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

TransitionMatrix read_transition_csv(const std::string& path, double dt) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open transition matrix CSV: " + path);
    std::string line;
    std::getline(in, line);  // header
    Eigen::MatrixXd p(3, 3);
    for (int r = 0; r < 3; ++r) {
        if (!std::getline(in, line))
            throw ValidationError("transition CSV: expected 3 data rows");
        std::size_t pos = line.find(',');  // skip state label
        if (pos == std::string::npos)
            throw ValidationError("transition CSV: malformed row: " + line);
        for (int c = 0; c < 3; ++c) {
            const std::size_t next = line.find(',', pos + 1);
            p(r, c) = std::stod(line.substr(pos + 1, next - pos - 1));
            pos = next;
        }
    }
    // Row-normalize away CSV rounding before the strict validity check.
    for (int r = 0; r < 3; ++r) p.row(r) /= p.row(r).sum();
    TransitionMatrix tm{p, dt};
    tm.validate();
    return tm;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config parse error: " + std::string(e.what()));
    }

    RunConfig cfg;
    try {
        for (const auto& r : doc.at("regimes")) {
            cfg.regimes.states.push_back({r.at("mu").get<double>(),
                                          r.at("sigma").get<double>(),
                                          r.at("lambda").get<double>(),
                                          r.at("rd").get<double>(),
                                          r.at("rf").get<double>()});
        }
        if (doc.contains("jump")) {
            cfg.jump_kind = doc["jump"].value("kind", "exponential");
            if (doc["jump"].contains("theta"))
                cfg.jump_theta = doc["jump"]["theta"].get<double>();
            else if (doc["jump"].contains("z"))
                cfg.jump_theta = doc["jump"]["z"].get<double>();
        }
        cfg.k0 = doc.value("k0", 0.0);

        if (doc.contains("rate_matrix")) {
            cfg.rate.pi = parse_matrix(doc["rate_matrix"]);
        } else if (doc.contains("transition")) {
            const auto& tr = doc["transition"];
            const double dt = tr.value("dt", 1.0 / 252.0);
            TransitionMatrix tm{Eigen::MatrixXd(), dt};
            if (tr.contains("matrix")) {
                tm.p = parse_matrix(tr["matrix"]);
                for (Eigen::Index r = 0; r < tm.p.rows(); ++r)
                    tm.p.row(r) /= tm.p.row(r).sum();
                tm.validate();
            } else if (tr.contains("csv")) {
                tm = read_transition_csv(tr["csv"].get<std::string>(), dt);
            } else {
                throw ValidationError("config: transition needs 'matrix' or 'csv'");
            }
            cfg.rate = transition_to_rate(tm);
        } else {
            throw ValidationError("config: need 'rate_matrix' or 'transition'");
        }

        if (doc.contains("pricing")) {
            const auto& p = doc["pricing"];
            cfg.s0 = p.value("s0", 1.0);
            if (p.contains("strikes"))
                cfg.strikes = p["strikes"].get<std::vector<double>>();
            if (p.contains("maturities"))
                cfg.maturities = p["maturities"].get<std::vector<double>>();
            cfg.initial_state = p.value("initial_state", 0);
        }

        if (doc.contains("curve")) {
            const auto& c = doc["curve"];
            if (c.contains("s_over_k"))
                cfg.curve_s_over_k = c["s_over_k"].get<std::vector<double>>();
            if (c.contains("thetas"))
                cfg.curve_thetas = c["thetas"].get<std::vector<double>>();
            if (c.contains("maturities"))
                cfg.curve_maturities = c["maturities"].get<std::vector<double>>();
        }

        if (doc.contains("mc")) {
            cfg.n_paths = doc["mc"].value("paths", 100000L);
            cfg.seed = doc["mc"].value("seed", std::uint64_t{42});
        }

        if (doc.contains("esscher_override")) {
            EsscherParams p;
            p.theta_c = doc["esscher_override"]["theta_c"].get<std::vector<double>>();
            p.theta_j = doc["esscher_override"]["theta_j"].get<std::vector<double>>();
            p.k0 = doc["esscher_override"].value("k0", cfg.k0);
            cfg.esscher_override = std::move(p);
        }
    } catch (const json::exception& e) {
        throw ValidationError("config field error: " + std::string(e.what()));
    }

    cfg.validate();
    return cfg;
}

}  // namespace fxmjd
