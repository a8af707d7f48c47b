#include "epigraphon/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/gamma.hpp>

#include "epigraphon/error.hpp"
#include "epigraphon/format.hpp"
#include "epigraphon/spectral.hpp"

namespace epigraphon {

StepGraphon::StepGraphon(Matrix values) : values_(std::move(values)) {
    if (!values_.is_square() || values_.rows() == 0)
        throw Error(ErrorKind::DimensionMismatch, "step graphon needs a nonempty square value matrix");
    if (!all_finite(values_)) throw Error(ErrorKind::NonFiniteInput, "step graphon values must be finite");
    for (double v : values_.data())
        if (v < 0.0 || v > 1.0) throw Error(ErrorKind::WeightOutOfRange, "step graphon value outside [0,1]");
    if (!is_symmetric(values_)) throw Error(ErrorKind::InvalidGraph, "step graphon values must be symmetric");
}

KernelGraphon::KernelGraphon(std::string name, Vector params, kernels::Kernel2D f, double bound)
    : name_(std::move(name)), params_(std::move(params)), f_(std::move(f)), bound_(bound) {
    if (!(bound_ > 0.0 && bound_ <= 1.0)) throw Error(ErrorKind::WeightOutOfRange, "kernel bound must lie in (0,1]");
    constexpr int kGrid = 33;
    for (int a = 0; a < kGrid; ++a)
        for (int b = 0; b <= a; ++b) {
            const double x = a / double(kGrid - 1);
            const double y = b / double(kGrid - 1);
            const double wxy = f_(x, y);
            const double wyx = f_(y, x);
            if (!std::isfinite(wxy) || wxy < 0.0 || wxy > bound_ * (1.0 + 1e-12))
                throw Error(ErrorKind::WeightOutOfRange, name_ + " kernel leaves [0, K_w] on the validation grid");
            if (std::abs(wxy - wyx) > 1e-12 * std::max(1.0, std::abs(wxy)))
                throw Error(ErrorKind::AsymmetricRequest, name_ + " kernel is not symmetric");
        }
}

std::size_t cell_of(double x, std::size_t n) {
    const auto c = static_cast<std::size_t>(std::floor(static_cast<double>(n) * x));
    return std::min(c, n - 1);
}

namespace {

void check_domain(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw Error(ErrorKind::OutOfDomain, "graphon argument outside [0,1]^2");
}

// Evaluation without domain checks, for internal loops over valid points.
double eval_raw(const Graphon& w, double x, double y) {
    if (const auto* step = std::get_if<StepGraphon>(&w)) {
        const std::size_t n = step->n_blocks();
        return step->values()(cell_of(x, n), cell_of(y, n));
    }
    return std::get<KernelGraphon>(w)(x, y);
}

kernels::Kernel2D as_function(const Graphon& w) {
    if (const auto* k = std::get_if<KernelGraphon>(&w)) return k->function();
    const StepGraphon& step = std::get<StepGraphon>(w);
    return [&step](double x, double y) {
        const std::size_t n = step.n_blocks();
        return step.values()(cell_of(x, n), cell_of(y, n));
    };
}

}  // namespace

// Breakpoints are compared as integers in units of 1 / (na * nb).
std::vector<RefinementPiece> common_refinement(std::size_t na, std::size_t nb) {
    std::vector<RefinementPiece> pieces;
    const std::uint64_t unit_a = nb;  // width of an a-cell
    const std::uint64_t unit_b = na;
    const std::uint64_t total = static_cast<std::uint64_t>(na) * nb;
    std::uint64_t pos = 0;
    std::size_t a = 0, b = 0;
    while (pos < total) {
        const std::uint64_t end_a = (a + 1) * unit_a;
        const std::uint64_t end_b = (b + 1) * unit_b;
        const std::uint64_t end = std::min(end_a, end_b);
        pieces.push_back({static_cast<double>(end - pos) / static_cast<double>(total), end - pos, a, b});
        pos = end;
        if (end == end_a) ++a;
        if (end == end_b) ++b;
    }
    return pieces;
}

double eval(const Graphon& w, double x, double y) {
    check_domain(x, y);
    return eval_raw(w, x, y);
}

double graphon_bound(const Graphon& w) {
    if (const auto* k = std::get_if<KernelGraphon>(&w)) return k->bound();
    const auto data = std::get<StepGraphon>(w).values().data();
    return *std::max_element(data.begin(), data.end());
}

StepGraphon constant_graphon(double c) { return StepGraphon(Matrix{{c}}); }

StepGraphon graphon_from_graph(const Graph& g) {
    for (double v : g.weights().data())
        if (v > 1.0) throw Error(ErrorKind::WeightOutOfRange, "graph weight above 1 has no graphon in W0");
    if (!g.symmetric()) throw Error(ErrorKind::InvalidGraph, "only symmetric graphs define a graphon");
    return StepGraphon(g.weights());
}

KernelGraphon gaussian_graphon(double c_w, double x0, double sigma) {
    if (!(c_w > 0.0 && c_w <= 1.0)) throw Error(ErrorKind::InvalidArgument, "C_W must lie in (0,1]");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw Error(ErrorKind::InvalidArgument, "x0 must lie in [0,1]");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
    const double inv = 1.0 / (2.0 * sigma * sigma);
    auto f = [c_w, x0, inv](double x, double y) {
        const double dx = x - x0;
        const double dy = y - x0;
        return c_w * std::exp(-(dx * dx + dy * dy) * inv);
    };
    return KernelGraphon("gaussian", {c_w, x0, sigma}, f, c_w);
}

KernelGraphon gaussian_graphon(double c_w, double x0, double y0, double sigma_x, double sigma_y) {
    if (y0 != x0 || sigma_x != sigma_y)
        throw Error(ErrorKind::AsymmetricRequest, "Gaussian graphon needs y0 = x0 and sigma_x = sigma_y");
    return gaussian_graphon(c_w, x0, sigma_x);
}

KernelGraphon gamma_contact_graphon(double shape, double rate, double cap) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gamma shape and rate must be positive");
    if (!(cap > 0.0 && cap <= 1.0)) throw Error(ErrorKind::InvalidArgument, "cap must lie in (0,1]");
    const boost::math::gamma_distribution<double> dist(shape, 1.0 / rate);
    auto g = [dist](double x) {
        const double u = std::min(x, kGammaQuantileCap);
        return u <= 0.0 ? 0.0 : boost::math::quantile(dist, u);
    };
    const double g_max = g(kGammaQuantileCap);
    auto f = [g, cap, g_max](double x, double y) { return cap * ((g(x) / g_max) * (g(y) / g_max)); };
    return KernelGraphon("gamma", {shape, rate, cap}, f, cap);
}

Vector midpoints(std::size_t n) {
    Vector x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = (2.0 * static_cast<double>(k) + 1.0) / (2.0 * static_cast<double>(n));
    return x;
}

Matrix quadrature_matrix(const Graphon& w, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "quadrature size must be positive");
    const Vector x = midpoints(n);
    return kernels::parallel::evaluate_grid(as_function(w), x, x);
}

namespace {

/// Copies the upper triangle onto the lower one. Summation order makes the two
/// triangles differ in the last bit; graphon matrices must be exactly symmetric.
Matrix mirror_upper(Matrix m) {
    for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < a; ++b) m(a, b) = m(b, a);
    return m;
}

}  // namespace

Matrix cell_average_matrix(const Graphon& w, std::size_t n, std::size_t sub) {
    if (n == 0 || sub == 0) throw Error(ErrorKind::InvalidArgument, "cell averaging sizes must be positive");
    if (const auto* step = std::get_if<StepGraphon>(&w)) {
        const std::vector<RefinementPiece> pieces = common_refinement(n, step->n_blocks());
        // Overlap fractions p.units / nb of each output cell are exact ratios of integers.
        const double width = static_cast<double>(step->n_blocks());
        Matrix avg(n, n);
        for (const RefinementPiece& p : pieces)
            for (const RefinementPiece& q : pieces)
                avg(p.left, q.left) += (static_cast<double>(p.units) / width) * (static_cast<double>(q.units) / width) *
                                       step->values()(p.right, q.right);
        return mirror_upper(std::move(avg));
    }
    const Matrix fine = quadrature_matrix(w, n * sub);
    Matrix avg(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double acc = 0.0;
            for (std::size_t u = 0; u < sub; ++u)
                for (std::size_t v = 0; v < sub; ++v) acc += fine(a * sub + u, b * sub + v);
            avg(a, b) = acc / static_cast<double>(sub * sub);
        }
    return mirror_upper(std::move(avg));
}

Vector apply_operator(const Graphon& w, std::span<const double> f, std::size_t n) {
    if (f.size() != n) throw Error(ErrorKind::DimensionMismatch, "function samples must match quadrature size");
    const Matrix q = quadrature_matrix(w, n);
    Vector out(n);
    kernels::parallel::matvec(q, f, out, 1.0 / static_cast<double>(n));
    return out;
}

Vector operator_spectrum_step(const StepGraphon& w) {
    const double n = static_cast<double>(w.n_blocks());
    const Vector all = symmetric_eigenvalues((1.0 / n) * w.values());
    double scale = 0.0;
    for (double v : all) scale = std::max(scale, std::abs(v));
    Vector nonzero;
    for (double v : all)
        if (std::abs(v) > 1e-12 * std::max(scale, 1.0)) nonzero.push_back(v);
    return nonzero;
}

double operator_lambda1(const Graphon& w, std::size_t quadrature_n) {
    if (const auto* step = std::get_if<StepGraphon>(&w)) {
        const Vector spec = operator_spectrum_step(*step);
        return spec.empty() ? 0.0 : std::max(spec.front(), 0.0);
    }
    return perron_root((1.0 / static_cast<double>(quadrature_n)) * quadrature_matrix(w, quadrature_n));
}

double l1_distance(const Graphon& w1, const Graphon& w2, std::size_t grid) {
    const auto* s1 = std::get_if<StepGraphon>(&w1);
    const auto* s2 = std::get_if<StepGraphon>(&w2);
    if (s1 && s2) {
        const std::vector<RefinementPiece> pieces = common_refinement(s1->n_blocks(), s2->n_blocks());
        double acc = 0.0;
        for (const RefinementPiece& p : pieces)
            for (const RefinementPiece& q : pieces)
                acc += p.length * q.length * std::abs(s1->values()(p.left, q.left) - s2->values()(p.right, q.right));
        return acc;
    }
    if (grid == 0) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
    const Matrix a = quadrature_matrix(w1, grid);
    const Matrix b = quadrature_matrix(w2, grid);
    double acc = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) acc += std::abs(a.data()[k] - b.data()[k]);
    return acc / static_cast<double>(grid * grid);
}

double cut_norm_exact(const Matrix& cells) {
    if (!cells.is_square() || cells.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "cut norm needs square cells");
    const std::size_t n = cells.rows();
    if (n > kMaxExactCutBlocks) throw Error(ErrorKind::TooManyBlocks, "exact cut norm limited to 16 blocks");
    // For fixed S the best T takes every column with positive (or every column
    // with negative) partial sum, so only the 2^n row subsets are enumerated.
    double best = 0.0;
    Vector col(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::fill(col.begin(), col.end(), 0.0);
        for (std::size_t a = 0; a < n; ++a)
            if (mask & (1u << a))
                for (std::size_t b = 0; b < n; ++b) col[b] += cells(a, b);
        double pos = 0.0, neg = 0.0;
        for (double c : col) (c > 0.0 ? pos : neg) += c;
        best = std::max({best, pos, -neg});
    }
    return best / static_cast<double>(n * n);
}

double cut_norm_exact(const StepGraphon& w) { return cut_norm_exact(w.values()); }

CutNormBounds cut_norm_bounds(const Graphon& w, std::size_t grid) {
    const Matrix cells = std::holds_alternative<StepGraphon>(w) ? std::get<StepGraphon>(w).values()
                                                                 : quadrature_matrix(w, grid);
    const double area = 1.0 / static_cast<double>(cells.rows() * cells.cols());
    double total = 0.0, l1 = 0.0, largest = 0.0;
    for (double v : cells.data()) {
        total += v;
        l1 += std::abs(v);
        largest = std::max(largest, std::abs(v));
    }
    return {std::max(std::abs(total), largest) * area, l1 * area};
}

Graph sample_graph_random(const Graphon& w, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be positive");
    Vector latent(n);
    for (std::size_t i = 0; i < n; ++i) latent[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    const Matrix probs = kernels::parallel::evaluate_grid(as_function(w), latent, latent);
    return Graph(kernels::parallel::bernoulli_adjacency(probs, seed), GraphKind::Simple01);
}

Graph sample_graph_deterministic(const Graphon& w, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be positive");
    if (std::holds_alternative<StepGraphon>(w)) return Graph(cell_average_matrix(w, n), GraphKind::Weighted);
    return Graph(quadrature_matrix(w, n), GraphKind::Weighted);
}

std::vector<GapRow> operator_norm_gap(const Graphon& w, std::span<const std::size_t> n_list, std::uint64_t seed,
                                      std::size_t kernel_quadrature) {
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        if (n_list[k] < 2) throw Error(ErrorKind::InvalidArgument, "sample sizes must be at least 2");
        if (k > 0 && n_list[k] <= n_list[k - 1]) throw Error(ErrorKind::InvalidArgument, "N list must be increasing");
    }
    const double limit = operator_lambda1(w, kernel_quadrature);
    std::vector<GapRow> rows;
    for (std::size_t n : n_list) {
        const Graph g = sample_graph_random(w, n, seed);
        const double sampled = perron_root(g.weights()) / static_cast<double>(n);
        const double gap = std::abs(limit - sampled);
        const double nn = static_cast<double>(n);
        rows.push_back({n, gap, gap / std::sqrt(std::log(nn) / nn)});
    }
    return rows;
}

void write_step_graphon(std::ostream& out, const StepGraphon& w) {
    out << "stepgraphon ";
    write_matrix(out, w.values());
}

StepGraphon read_step_graphon(std::istream& in) {
    std::string tag;
    if (!(in >> tag) || tag != "stepgraphon") throw Error(ErrorKind::ParseError, "expected 'stepgraphon n' header");
    return StepGraphon(read_matrix(in));
}

void write_ppm(std::ostream& out, const Matrix& values, double lo, double hi) {
    out << "P3\n" << values.cols() << ' ' << values.rows() << "\n255\n";
    const double range = hi - lo;
    for (std::size_t r = 0; r < values.rows(); ++r) {
        for (std::size_t c = 0; c < values.cols(); ++c) {
            double level = range > 0.0 ? (values(r, c) - lo) / range : 0.0;
            level = std::clamp(level, 0.0, 1.0);
            const auto g = static_cast<int>(std::lround(255.0 * level));
            out << (c ? " " : "") << g << ' ' << g << ' ' << g;
        }
        out << '\n';
    }
}

void write_grid_csv(std::ostream& out, const Matrix& grid) {
    out << "x,y,value\n";
    const Vector xs = midpoints(grid.rows());
    const Vector ys = midpoints(grid.cols());
    for (std::size_t r = 0; r < grid.rows(); ++r)
        for (std::size_t c = 0; c < grid.cols(); ++c)
            out << format_real(xs[r]) << ',' << format_real(ys[c]) << ',' << format_real(grid(r, c)) << '\n';
}

}  // namespace epigraphon
