#pragma once
// Scalar special functions: q-Pochhammer symbols (single and multi-base),
// elliptic theta functions, the named scalar factors, and the diagonal-vacuum
// coefficient families.  All truncations are certified against a geometric
// tail bound; silent truncation is not allowed.
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xxz {

using cplx = std::complex<double>;

struct ModelParams {
    cplx q{-0.4, 0.0};  // anisotropy base; physical runs: real, in (-1,0)
    double r = 0.0;     // diagonal boundary parameter
    double s = 0.0;     // triangular boundary strength

    bool physical_regime() const {
        return q.imag() == 0.0 && q.real() > -1.0 && q.real() < 0.0 &&
               r >= -1.0 && r <= 1.0;
    }
    cplx delta() const { return 0.5 * (q + 1.0 / q); }
    double qr() const { return q.real(); }
};

struct Precision {
    double rel_tol = 1e-15;
    int max_terms = 4000;
};

struct TruncationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (z; p)_inf = prod_{n>=0} (1 - p^n z)
cplx qpochhammer(cplx z, cplx p, const Precision& prec = {});

// (z; p_1, ..., p_N)_inf, product over the full exponent lattice n_k >= 0
cplx qpochhammer_multi(cplx z, const std::vector<cplx>& bases,
                       const Precision& prec = {});

// Theta_p(z) = (p;p)(z;p)(p/z;p)
cplx theta(cplx z, cplx p, const Precision& prec = {});

// derivative of Theta_p at the lattice point p^k (any integer k); used for
// analytic residues of 1/Theta at its zeros
cplx theta_deriv_at_lattice(cplx p, int k, const Precision& prec = {});

// {z} = (z; q^4, q^4) and [z] = (z; q^8, q^8)
std::pair<cplx, cplx> double_products(cplx z, const ModelParams& mp,
                                      const Precision& prec = {});

double q_integer(int n, double q);
double q_factorial(int n, double q);

cplx kappa(cplx zeta, const ModelParams& mp, const Precision& prec = {});

struct ScalarFactors {
    cplx varphi;          // phi(zeta^2; r)
    cplx lambda;          // Lambda(zeta; r)
    cplx lambda_eigen_i0; // 1
    cplx lambda_eigen_i1; // Lambda
    cplx tau;
    cplx g;               // (q^2;q^4)/(q^4;q^4)
};
ScalarFactors scalar_factors(cplx zeta, const ModelParams& mp,
                             const Precision& prec = {});

// phi(z; r) by itself (the K-matrix scalar factor)
cplx varphi(cplx z, const ModelParams& mp, const Precision& prec = {});

struct DiagonalVacuumCoeffs {
    int n = 1;
    int i = 0;
    double alpha_n = 0, gamma_n = 0, theta_n = 0, beta_n = 0, delta_n = 0;
};
// needs q > 0 when n is odd (half-integer powers of q appear)
DiagonalVacuumCoeffs vacuum_coeffs(int n, int i, const ModelParams& mp);

// |LHS - RHS| / max(|LHS|, |RHS|) for the exp-series vs product identities,
// formula_id in 1..10; run at real q in (0,1) (fixes the q^{1/2} branch)
double appendix_c_residual(int formula_id, double c, cplx y, int i,
                           const ModelParams& mp, const Precision& prec = {});

}  // namespace xxz
