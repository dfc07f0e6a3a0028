#include "fxmjd/matrix_exp.hpp"

#include <cmath>

#include "fxmjd/errors.hpp"

namespace fxmjd {

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw ValidationError("matrix_exp: matrix must be square");
    const Eigen::Index n = a.rows();

    // Pade(13) numerator/denominator coefficients.
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    constexpr double theta13 = 5.371920351148152;
    int squarings = 0;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    }
    const Eigen::MatrixXd as = a / std::ldexp(1.0, squarings);

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = as * as;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;

    const Eigen::MatrixXd u =
        as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
              b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Eigen::MatrixXd v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
        b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    Eigen::MatrixXd f = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) f = f * f;
    return f;
}

}  // namespace fxmjd
