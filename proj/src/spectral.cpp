#include "epigraphon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epigraphon/error.hpp"
#include "epigraphon/kernels.hpp"

namespace epigraphon {

namespace {

void check_scaling(std::span<const double> s, const Matrix& a) {
    if (!a.is_square() || a.rows() != s.size())
        throw Error(ErrorKind::DimensionMismatch, "susceptible vector length differs from matrix size");
}

}  // namespace

Matrix build_B(std::span<const double> s, const Matrix& a) {
    check_scaling(s, a);
    Matrix b = a;
    for (std::size_t j = 0; j < b.rows(); ++j)
        for (double& v : b.row(j)) v *= s[j];
    return b;
}

Matrix build_B_sym(std::span<const double> s, const Matrix& a) {
    check_scaling(s, a);
    Vector root(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] < 0.0) throw Error(ErrorKind::NegativeSusceptible, "negative susceptible fraction at node " + std::to_string(j));
        root[j] = std::sqrt(s[j]);
    }
    Matrix b = a;
    for (std::size_t j = 0; j < b.rows(); ++j)
        for (std::size_t k = 0; k < b.cols(); ++k) b(j, k) = root[j] * a(j, k) * root[k];
    return b;
}

EigenPair dominant_left_eigenpair(const Matrix& m, double tol, std::size_t max_iter) {
    if (!m.is_square() || m.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "eigenproblem needs a square matrix");
    if (!all_finite(m)) throw Error(ErrorKind::NonFiniteInput, "matrix has non-finite entries");
    const std::size_t n = m.rows();
    const Matrix mt = m.transposed();

    double gershgorin = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double col = 0.0;
        for (double v : mt.row(k)) {
            if (v < 0.0) throw Error(ErrorKind::InvalidArgument, "power iteration needs a nonnegative matrix");
            col += v;
        }
        gershgorin = std::max(gershgorin, col);
    }
    if (gershgorin == 0.0) throw Error(ErrorKind::ZeroMatrix, "matrix is identically zero");
    // sqrt(max_j (M^2)_jj) never exceeds the spectral radius; shifting by it
    // breaks the +-rho tie of bipartite supports without swamping a small rho.
    double lower = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double diag = 0.0;
        for (std::size_t k = 0; k < n; ++k) diag += m(j, k) * m(k, j);
        lower = std::max(lower, std::sqrt(diag));
    }
    const double shift = lower > 0.0 ? lower : 0.5 * gershgorin;

    Vector v(n, 1.0 / static_cast<double>(n));
    Vector y(n);
    EigenPair pair;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        kernels::parallel::matvec(mt, v, y);
        const double lambda = std::accumulate(y.begin(), y.end(), 0.0);
        double residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) residual = std::max(residual, std::abs(y[j] - lambda * v[j]));
        if (residual <= tol) {
            pair.lambda = lambda;
            pair.v = v;
            pair.iterations = it;
            pair.residual = residual;
            return pair;
        }
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            y[j] += shift * v[j];
            norm += y[j];
        }
        for (std::size_t j = 0; j < n; ++j) v[j] = y[j] / norm;
    }
    throw Error(ErrorKind::NoConvergence,
                "power iteration did not reach tolerance in " + std::to_string(max_iter) +
                    " iterations (dominant eigenvalue nearly degenerate?)");
}

double perron_root(const Matrix& m, double tol) {
    const auto data = m.data();
    const double peak = std::accumulate(data.begin(), data.end(), 0.0,
                                        [](double acc, double v) { return std::max(acc, std::abs(v)); });
    if (peak == 0.0) return 0.0;
    // Iterate on m / peak so the tolerance is relative to the entries' scale.
    return peak * dominant_left_eigenpair((1.0 / peak) * m, tol).lambda;
}

SpectralBounds spectral_bounds(const Graph& g, std::span<const double> s) {
    if (g.kind() != GraphKind::Simple01) throw Error(ErrorKind::InvalidGraph, "spectral bounds need a Simple01 graph");
    if (s.size() != g.n()) throw Error(ErrorKind::DimensionMismatch, "susceptible vector length");
    const DegreeStats deg = degree_stats(g);
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return {(deg.d_avg + 1.0) * *lo, (deg.d_max + 1.0) * *hi};
}

ThresholdMargin threshold_margin(double t, const SeirState& x, const Matrix& coupling, const EpidemicParams& p) {
    const std::size_t n = x.n();
    Vector beta(n), gamma(n);
    p.beta.fill(t, beta);
    p.gamma.fill(t, gamma);
    ThresholdMargin out;
    const auto [bmin, bmax] = std::minmax_element(beta.begin(), beta.end());
    const auto [gmin, gmax] = std::minmax_element(gamma.begin(), gamma.end());
    out.beta = *bmax;
    out.gamma = *gmin;
    out.envelope = *bmin != *bmax || *gmin != *gmax;
    out.lambda_m = perron_root(build_B(x.s, coupling));
    out.margin = out.beta * out.lambda_m - out.gamma;
    return out;
}

ThresholdMargin threshold_margin(double t, const SeirState& x, const Graph& g, const EpidemicParams& p,
                                 CouplingMode mode) {
    return threshold_margin(t, x, NetworkSystem::from_graph(g, p, mode).effective_coupling(), p);
}

QTauSeries q_tau_series(const Trace& trace, const Matrix& coupling, const EpidemicParams& p, double tau) {
    if (trace.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty trace");
    const double slack = 1e-9 * std::max(1.0, std::abs(tau));
    if (tau < trace.times.front() - slack || tau > trace.times.back() + slack)
        throw Error(ErrorKind::InvalidArgument, "tau outside the recorded time range");
    const auto first = static_cast<std::size_t>(
        std::lower_bound(trace.times.begin(), trace.times.end(), tau - slack) - trace.times.begin());

    const SeirState& at_tau = trace.states[first];
    if (std::any_of(at_tau.s.begin(), at_tau.s.end(), [](double v) { return !(v > 0.0); }))
        throw Error(ErrorKind::InvalidArgument, "q_tau needs s(tau) > 0 componentwise");

    QTauSeries out;
    out.tau = trace.times[first];
    out.at_tau = threshold_margin(out.tau, at_tau, coupling, p);
    out.left_vector = dominant_left_eigenpair(build_B(at_tau.s, coupling)).v;
    for (std::size_t k = first; k < trace.size(); ++k) {
        const SeirState& x = trace.states[k];
        double q = 0.0;
        for (std::size_t j = 0; j < x.n(); ++j) q += out.left_vector[j] * (x.e[j] + x.i[j]);
        out.times.push_back(trace.times[k]);
        out.q.push_back(q);
    }
    return out;
}

}  // namespace epigraphon
