#include "fxmjd/estimator.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fxmjd {

EstimationResult estimate_transition_matrix(const std::vector<double>& opens,
                                            const EstimatorParams& params,
                                            double dt) {
    if (params.candles_back_up < 1 || params.candles_back_down < 1 ||
        params.candles_up < 1 || params.candles_down < 1)
        throw ValidationError("estimator: window lengths must be >= 1");
    if (params.delta_up < 0.0 || params.delta_down < 0.0 ||
        params.delta_back_up < 0.0 || params.delta_back_down < 0.0)
        throw ValidationError("estimator: thresholds must be >= 0");
    if (!(dt > 0.0)) throw ValidationError("estimator: dt must be > 0");

    const int n = static_cast<int>(opens.size());
    const int max_back = std::max(params.candles_back_up, params.candles_back_down);
    const int max_ahead = std::max(params.candles_up, params.candles_down);
    if (n <= max_back + max_ahead)
        throw ValidationError("estimator: series too short for the chosen windows");

    const double du = params.delta_up / 1e4;
    const double dd = params.delta_down / 1e4;

    // Prior trend per bar: +1 up, -1 down, 0 sideway. Bars inside the
    // warm-up stay sideway; the down test overrides the up test.
    std::vector<int> before(n, 0);
    for (int i = max_back; i < n; ++i) {
        if (opens[i] - opens[i - params.candles_back_up] >= du) before[i] = 1;
        if (opens[i - params.candles_back_down] - opens[i] >= dd) before[i] = -1;
    }

    auto row_of = [](int cls) { return cls == 1 ? 0 : (cls == -1 ? 1 : 2); };

    Eigen::Matrix3d counts = Eigen::Matrix3d::Zero();
    const int upper = n - max_ahead;
    for (int i = 0; i < upper; ++i) {
        int future = 2;  // sideway
        if (opens[i + params.candles_up] - opens[i] >= du)
            future = 0;
        else if (opens[i] - opens[i + params.candles_down] >= dd)
            future = 1;
        counts(row_of(before[i]), future) += 1.0;
    }

    static const char* kNames[3] = {"up", "down", "sideway"};
    Eigen::Matrix3d p = Eigen::Matrix3d::Zero();
    std::string missing;
    for (int r = 0; r < 3; ++r) {
        const double total = counts.row(r).sum();
        if (total == 0.0) {
            if (!missing.empty()) missing += ", ";
            missing += kNames[r];
            continue;
        }
        p.row(r) = counts.row(r) / total;
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "estimator: regime(s) never observed: " << missing
            << "; observed rows:";
        for (int r = 0; r < 3; ++r) {
            if (counts.row(r).sum() == 0.0) continue;
            msg << ' ' << kNames[r] << "=(" << p(r, 0) << ',' << p(r, 1) << ','
                << p(r, 2) << ')';
        }
        throw ValidationError(msg.str());
    }

    TransitionMatrix tm{p, dt};
    tm.validate();
    return {tm, counts};
}

std::vector<double> read_price_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open price file: " + path);

    std::vector<double> prices;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        // strip whitespace/CR
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);

        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') {
            if (first) {  // header line
                first = false;
                continue;
            }
            throw ValidationError("non-numeric line in price file: " + tok);
        }
        prices.push_back(v);
        first = false;
    }
    if (prices.empty()) throw ValidationError("price file is empty: " + path);
    return prices;
}

std::string transition_matrix_csv(const TransitionMatrix& m) {
    static const char* kNames[3] = {"up", "down", "sideway"};
    std::ostringstream out;
    out.precision(10);
    out << "state,up,down,sideway\n";
    for (int r = 0; r < 3; ++r) {
        out << kNames[r];
        for (int c = 0; c < 3; ++c) out << ',' << m.p(r, c);
        out << '\n';
    }
    return out.str();
}

std::string counts_csv(const Eigen::Matrix3d& counts, const EstimatorParams& p) {
    static const char* kNames[3] = {"up", "down", "sideway"};
    std::ostringstream out;
    out << "# params=(" << p.candles_back_up << ',' << p.candles_back_down << ','
        << p.delta_back_up << ',' << p.delta_back_down << ',' << p.candles_up << ','
        << p.candles_down << ',' << p.delta_up << ',' << p.delta_down << ")\n";
    out << "state,up,down,sideway\n";
    for (int r = 0; r < 3; ++r) {
        out << kNames[r];
        for (int c = 0; c < 3; ++c)
            out << ',' << static_cast<long long>(counts(r, c));
        out << '\n';
    }
    return out.str();
}

}  // namespace fxmjd
