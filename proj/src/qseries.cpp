#include "qseries.hpp"

#include <cmath>
#include <cstdlib>

namespace xxz {

namespace {

double safe_mag(const cplx& z) { return std::abs(z); }

}  // namespace

cplx qpochhammer(cplx z, cplx p, const Precision& prec) {
    const double pm = safe_mag(p);
    if (pm >= 1.0) throw DomainError("qpochhammer: |p| >= 1");
    const double zm = safe_mag(z);
    if (zm == 0.0) return 1.0;
    cplx acc = 1.0;
    cplx f = 1.0;  // p^n
    double fm = 1.0;
    const double tail_den = 1.0 - pm;
    for (int n = 0; n < prec.max_terms; ++n) {
        // remaining log-magnitude bounded by sum_{m>=n} |p^m z| = |z| fm/(1-|p|)
        const double tail = zm * fm / tail_den;
        const double scale = std::max(safe_mag(acc), 1e-300);
        if (tail < prec.rel_tol * scale || tail < 1e-300) return acc;
        acc *= (1.0 - f * z);
        if (acc == cplx(0.0)) return acc;  // exact zero factor
        f *= p;
        fm *= pm;
    }
    throw TruncationFailure("qpochhammer: max_terms reached");
}

cplx qpochhammer_multi(cplx z, const std::vector<cplx>& bases,
                       const Precision& prec) {
    const int N = static_cast<int>(bases.size());
    if (N == 0) return 1.0 - z;
    if (N == 1) return qpochhammer(z, bases[0], prec);
    double pmax = 0.0;
    for (const auto& p : bases) {
        const double pm = safe_mag(p);
        if (pm >= 1.0) throw DomainError("qpochhammer_multi: |p| >= 1");
        pmax = std::max(pmax, pm);
    }
    const double zm = safe_mag(z);
    if (zm == 0.0) return 1.0;
    // iterate the exponent lattice in shells of total degree; the tail over
    // degrees >= d is bounded by count(d) pmax^d |z| / (1-pmax)^N
    const double tail_den = std::pow(1.0 - pmax, N);
    cplx acc = 1.0;
    std::vector<int> n(N, 0);
    double shell_count = 1.0;
    double pd = 1.0;  // pmax^d
    for (int d = 0; d < prec.max_terms; ++d) {
        const double tail = shell_count * pd * zm / tail_den;
        const double scale = std::max(safe_mag(acc), 1e-300);
        if (tail < prec.rel_tol * scale || tail < 1e-300) return acc;
        // enumerate compositions n_1 + ... + n_N = d
        std::fill(n.begin(), n.end(), 0);
        n[0] = d;
        for (;;) {
            cplx f = 1.0;
            for (int k = 0; k < N; ++k)
                for (int j = 0; j < n[k]; ++j) f *= bases[k];
            acc *= (1.0 - f * z);
            if (acc == cplx(0.0)) return acc;
            // next composition (colex)
            int k = 0;
            while (k < N - 1 && n[k] == 0) ++k;
            if (k == N - 1) break;
            const int head = n[k];
            n[k] = 0;
            n[0] = head - 1;
            n[k + 1] += 1;
        }
        shell_count = shell_count * (d + N) / (d + 1);  // C(d+N-1, N-1) update
        pd *= pmax;
    }
    throw TruncationFailure("qpochhammer_multi: max_terms reached");
}

cplx theta(cplx z, cplx p, const Precision& prec) {
    if (z == cplx(0.0)) throw DomainError("theta: z = 0");
    return qpochhammer(p, p, prec) * qpochhammer(z, p, prec) *
           qpochhammer(p / z, p, prec);
}

cplx theta_deriv_at_lattice(cplx p, int k, const Precision& prec) {
    // Theta_p'(1) = -(p;p)^3; quasi-periodicity Theta(pz) = -z^{-1} Theta(z)
    // gives Theta'(p^{k+1}) = -p^{-k-1} Theta'(p^k)
    cplx pp = qpochhammer(p, p, prec);
    cplx d = -pp * pp * pp;
    if (k >= 0) {
        for (int j = 0; j < k; ++j) d = -std::pow(p, -(j + 1)) * d;
    } else {
        for (int j = 0; j > k; --j) d = -std::pow(p, j) * d;
    }
    return d;
}

std::pair<cplx, cplx> double_products(cplx z, const ModelParams& mp,
                                      const Precision& prec) {
    const cplx q2 = mp.q * mp.q;
    const cplx q4 = q2 * q2;
    const cplx q8 = q4 * q4;
    return {qpochhammer_multi(z, {q4, q4}, prec),
            qpochhammer_multi(z, {q8, q8}, prec)};
}

double q_integer(int n, double q) {
    if (q == 0.0 || q == 1.0 || q == -1.0)
        throw DomainError("q_integer: q must not be 0 or +-1");
    return (std::pow(q, n) - std::pow(q, -n)) / (q - 1.0 / q);
}

double q_factorial(int n, double q) {
    if (n < 0) throw DomainError("q_factorial: n < 0");
    double f = 1.0;
    for (int k = 1; k <= n; ++k) f *= q_integer(k, q);
    return f;
}

cplx kappa(cplx zeta, const ModelParams& mp, const Precision& prec) {
    const cplx q2 = mp.q * mp.q;
    const cplx q4 = q2 * q2;
    const cplx z2 = zeta * zeta;
    const cplx den =
        qpochhammer(q4 / z2, q4, prec) * qpochhammer(q2 * z2, q4, prec);
    if (safe_mag(den) < 1e-12) throw PoleError("kappa: denominator vanishes");
    return zeta * qpochhammer(q4 * z2, q4, prec) *
           qpochhammer(q2 / z2, q4, prec) / den;
}

cplx varphi(cplx z, const ModelParams& mp, const Precision& prec) {
    const cplx q2 = mp.q * mp.q;
    const cplx q4 = q2 * q2;
    const cplx q6 = q4 * q2;
    const cplx q8 = q4 * q4;
    const cplx den = qpochhammer(q2 * mp.r * z, q4, prec) *
                     qpochhammer(q8 * z * z, q8, prec);
    if (safe_mag(den) < 1e-12) throw PoleError("varphi: denominator vanishes");
    return qpochhammer(q4 * mp.r * z, q4, prec) *
           qpochhammer(q6 * z * z, q8, prec) / den;
}

ScalarFactors scalar_factors(cplx zeta, const ModelParams& mp,
                             const Precision& prec) {
    if (zeta == cplx(0.0)) throw DomainError("scalar_factors: zeta = 0");
    const cplx q2 = mp.q * mp.q;
    const cplx q4 = q2 * q2;
    const cplx z2 = zeta * zeta;
    const double r = mp.r;
    ScalarFactors out;
    out.varphi = varphi(z2, mp, prec);
    if (r == 0.0) {
        // Lambda is a ratio of thetas at r-proportional arguments and has no
        // finite r -> 0 limit off |zeta| = 1; leave it NaN in that case
        out.lambda = cplx(std::nan(""), std::nan(""));
    } else {
        const cplx den =
            theta(r / z2, q4, prec) * theta(q2 * r * z2, q4, prec);
        if (safe_mag(den) < 1e-12)
            throw PoleError("scalar_factors: Lambda denominator vanishes");
        out.lambda = theta(r * z2, q4, prec) * theta(q2 * r / z2, q4, prec) /
                     (z2 * den);
    }
    out.lambda_eigen_i0 = 1.0;
    out.lambda_eigen_i1 = out.lambda;
    {
        const cplx den = theta(mp.q / z2, q4, prec);
        if (safe_mag(den) < 1e-12)
            throw PoleError("scalar_factors: tau denominator vanishes");
        out.tau = theta(mp.q * z2, q4, prec) / (zeta * den);
    }
    out.g = qpochhammer(q2, q4, prec) / qpochhammer(q4, q4, prec);
    return out;
}

DiagonalVacuumCoeffs vacuum_coeffs(int n, int i, const ModelParams& mp) {
    if (n < 1) throw DomainError("vacuum_coeffs: n < 1");
    if (i != 0 && i != 1) throw DomainError("vacuum_coeffs: i not in {0,1}");
    const double q = mp.qr();
    if (mp.q.imag() != 0.0)
        throw DomainError("vacuum_coeffs: q must be real");
    if (q <= 0.0 && (n % 2) != 0)
        throw DomainError("vacuum_coeffs: odd n needs q > 0 (q^{1/2} branch)");
    const double r = mp.r;
    DiagonalVacuumCoeffs c;
    c.n = n;
    c.i = i;
    c.alpha_n = -std::pow(q, 6 * n);
    c.gamma_n = -std::pow(q, -2 * n);
    c.theta_n = (n % 2 == 0) ? 1.0 : 0.0;
    const double two_n = q_integer(2 * n, q);
    const double even_beta =
        -c.theta_n * std::pow(q, 2.5 * n) * (1.0 - std::pow(q, n)) / two_n;
    const double even_delta =
        c.theta_n * std::pow(q, -1.5 * n) * (1.0 - std::pow(q, n)) / two_n;
    if (i == 0) {
        c.beta_n = even_beta - std::pow(q, 3.5 * n) * std::pow(r, n) / two_n;
        c.delta_n = even_delta - std::pow(q, -2.5 * n) * std::pow(r, n) / two_n;
    } else {
        if (r == 0.0) throw DomainError("vacuum_coeffs: i=1 needs r != 0");
        c.beta_n = even_beta + std::pow(q, 1.5 * n) * std::pow(r, -n) / two_n;
        c.delta_n = even_delta + std::pow(q, -0.5 * n) * std::pow(r, -n) / two_n;
    }
    return c;
}

namespace {

// LHS of the exp-series identities: exp(sum_{n>=1} term(n) y^n)
template <typename TermFn>
cplx exp_series(TermFn term, cplx y, const Precision& prec) {
    cplx S = 0.0;
    cplx yn = 1.0;
    for (int n = 1; n < prec.max_terms; ++n) {
        yn *= y;
        const cplx t = term(n) * yn;
        S += t;
        if (safe_mag(t) < prec.rel_tol * std::max(1.0, safe_mag(S)) &&
            n > 4)
            return std::exp(S);
    }
    throw TruncationFailure("appendix_c_residual: series did not converge");
}

}  // namespace

double appendix_c_residual(int formula_id, double c, cplx y, int i,
                           const ModelParams& mp, const Precision& prec) {
    const double q = mp.qr();
    if (mp.q.imag() != 0.0 || q <= 0.0 || q >= 1.0)
        throw DomainError("appendix_c_residual: needs real q in (0,1)");
    const double r = mp.r;
    const double qi = q - 1.0 / q;
    const cplx q2 = cplx(q * q), q4 = cplx(std::pow(q, 4)),
               q8 = cplx(std::pow(q, 8));
    auto qn = [&](double e) { return std::pow(q, e); };
    auto dd = [&](cplx z) { return qpochhammer_multi(z, {q4, q4}, prec); };
    auto oo = [&](cplx z) { return qpochhammer_multi(z, {q8, q8}, prec); };
    auto ag = [&](int n) { return 1.0 - std::pow(q, 4 * n); };  // 1 - a_n g_n
    const double ri = std::pow(r, 1 - 2 * i);  // r or 1/r
    const double sgn_i = 1 - 2 * i;            // +1 or -1 exponent

    cplx L, R;
    switch (formula_id) {
        case 1:
            L = exp_series(
                [&](int n) {
                    return qn((c + 2) * n) / (qi * n * q_integer(2 * n, q));
                },
                y, prec);
            R = qpochhammer(qn(c + 4) * y, q4, prec);
            break;
        case 2:
            L = exp_series(
                [&](int n) {
                    return q_integer(n, q) * qn((c + 2) * n) /
                           (qi * n * std::pow(q_integer(2 * n, q), 2));
                },
                y, prec);
            R = dd(qn(c + 5) * y) / dd(qn(c + 7) * y);
            break;
        case 3:
            L = exp_series(
                [&](int n) {
                    return qn((c + 2) * n) / (qi * n * q_integer(n, q));
                },
                y, prec);
            // (q-1/q)[n] = -q^{-n}(1-q^{2n}): the series is the log form
            // of (q^{c+3}y; q^2)
            R = qpochhammer(qn(c + 3) * y, q2, prec);
            break;
        case 4:
            L = exp_series(
                [&](int n) {
                    return q_integer(n, q) * qn(c * n) /
                           (n * q_integer(2 * n, q) * ag(n));
                },
                y, prec);
            R = dd(qn(c + 3) * y) / dd(qn(c + 1) * y);
            break;
        case 5:
            L = exp_series(
                [&](int n) {
                    return q_integer(2 * n, q) * qn(c * n) /
                           (n * q_integer(n, q) * ag(n));
                },
                y, prec);
            R = 1.0 / qpochhammer(qn(c - 1) * y, q2, prec);
            break;
        case 6:
            L = exp_series(
                [&](int n) {
                    return q_integer(n, q) * vacuum_coeffs(n, i, mp).delta_n *
                           qn(c * n / 2.0) / (n * ag(n));
                },
                y, prec);
            R = std::sqrt(oo(qn(c + 3) * y * y) * oo(qn(c + 1) * y * y) /
                          (oo(qn(c - 1) * y * y) * oo(qn(c + 5) * y * y))) *
                std::pow(dd(qn((c - 3) / 2.0 + 2 * i) * ri * y) /
                             dd(qn((c + 1) / 2.0 + 2 * i) * ri * y),
                         sgn_i);
            break;
        case 7:
            L = exp_series(
                [&](int n) {
                    return q_integer(2 * n, q) *
                           vacuum_coeffs(n, i, mp).delta_n * qn(c * n / 2.0) /
                           (n * ag(n));
                },
                y, prec);
            R = std::sqrt(qpochhammer(qn(c - 1) * y * y, q8, prec) /
                          qpochhammer(qn(c - 3) * y * y, q8, prec)) *
                std::pow(
                    qpochhammer(qn((c - 5) / 2.0 + 2 * i) * ri * y, q4, prec),
                    sgn_i);
            break;
        case 8:
            L = exp_series(
                [&](int n) {
                    return q_integer(n, q) * vacuum_coeffs(n, i, mp).beta_n *
                           qn(c * n / 2.0) / (n * ag(n));
                },
                y, prec);
            R = std::sqrt(oo(qn(c + 7) * y * y) * oo(qn(c + 13) * y * y) /
                          (oo(qn(c + 9) * y * y) * oo(qn(c + 11) * y * y))) *
                std::pow(dd(qn((c + 9) / 2.0 - 2 * i) * ri * y) /
                             dd(qn((c + 13) / 2.0 - 2 * i) * ri * y),
                         sgn_i);
            break;
        case 9:
            L = exp_series(
                [&](int n) {
                    return q_integer(2 * n, q) *
                           vacuum_coeffs(n, i, mp).beta_n * qn(c * n / 2.0) /
                           (n * ag(n));
                },
                y, prec);
            R = std::sqrt(qpochhammer(qn(c + 5) * y * y, q8, prec) /
                          qpochhammer(qn(c + 7) * y * y, q8, prec)) *
                std::pow(
                    qpochhammer(qn((c + 7) / 2.0 - 2 * i) * ri * y, q4, prec),
                    sgn_i);
            break;
        case 10:
            L = exp_series([&](int n) { return -1.0 / (n * ag(n) * ag(n)); },
                           y, prec);
            R = dd(y);
            break;
        default:
            throw DomainError("appendix_c_residual: formula_id must be 1..10");
    }
    const double d = safe_mag(L - R);
    return d / std::max(safe_mag(L), std::max(safe_mag(R), 1e-300));
}

}  // namespace xxz
