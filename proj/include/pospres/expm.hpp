#pragma once

// Dense matrix exponential by Pade approximation with scaling and squaring
// (Higham 2005). The ladder picks the cheapest approximant whose backward
// error bound covers the 1-norm; the number of squarings is reported so runs
// are reproducible.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace pospres {

struct ExpmResult {
    Eigen::MatrixXd value;
    int squarings = 0;
    int pade_order = 13;
};

namespace detail {

inline Eigen::MatrixXd pade_solve(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    // (V - U)^{-1} (V + U)
    return (v - u).partialPivLu().solve(v + u);
}

inline ExpmResult expm_pade_low(const Eigen::MatrixXd& a, const std::vector<double>& b, int order) {
    const auto n = a.rows();
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    Eigen::MatrixXd u = b[1] * ident;
    Eigen::MatrixXd v = b[0] * ident;
    Eigen::MatrixXd pow = ident;
    for (int k = 2; k + 1 <= order; k += 2) {
        pow = pow * a2;  // A^k
        u += b[static_cast<std::size_t>(k + 1)] * pow;
        v += b[static_cast<std::size_t>(k)] * pow;
    }
    return {pade_solve(a * u, v), 0, order};
}

}  // namespace detail

inline ExpmResult expm(const Eigen::MatrixXd& a) {
    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const std::vector<double> b9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                           30270240.,    2162160.,    110880.,     3960.,
                                           90.,          1.};
    static const std::vector<double> b13 = {64764752532480000., 32382376266240000., 7771770303897600.,
                                            1187353796428800.,  129060195264000.,   10559470521600.,
                                            670442572800.,      33522128640.,       1323241920.,
                                            40840800.,          960960.,            16380.,
                                            182.,               1.};
    const double theta3 = 1.495585217958292e-2;
    const double theta5 = 2.539398330063230e-1;
    const double theta7 = 9.504178996162932e-1;
    const double theta9 = 2.097847961257068e0;
    const double theta13 = 5.371920351148152e0;

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    if (norm <= theta3) return detail::expm_pade_low(a, b3, 3);
    if (norm <= theta5) return detail::expm_pade_low(a, b5, 5);
    if (norm <= theta7) return detail::expm_pade_low(a, b7, 7);
    if (norm <= theta9) return detail::expm_pade_low(a, b9, 9);

    int s = 0;
    if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const Eigen::MatrixXd as = a / std::pow(2.0, s);
    const auto n = a.rows();
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = as * as;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a2 * a4;
    const Eigen::MatrixXd u =
        as * (a6 * (b13[13] * a6 + b13[11] * a4 + b13[9] * a2) + b13[7] * a6 + b13[5] * a4 +
              b13[3] * a2 + b13[1] * ident);
    const Eigen::MatrixXd v = a6 * (b13[12] * a6 + b13[10] * a4 + b13[8] * a2) + b13[6] * a6 +
                              b13[4] * a4 + b13[2] * a2 + b13[0] * ident;
    Eigen::MatrixXd e = detail::pade_solve(u, v);
    for (int i = 0; i < s; ++i) e = e * e;
    return {std::move(e), s, 13};
}

}  // namespace pospres
