#include "capmax/models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "capmax/errors.hpp"
#include "capmax/rng.hpp"

namespace capmax {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kDegenerateNorm = 1e-14;

void check_params(const RVector& p, int P) {
    if (p.size() != P)
        throw InvalidArgument("parameter vector has length " +
                              std::to_string(p.size()) + ", expected " +
                              std::to_string(P));
    if (!p.allFinite())
        throw InvalidArgument("parameter vector contains non-finite values");
}
} // namespace

SensingModel::SensingModel(int M, int N, int P) : M_(M), N_(N), P_(P) {
    if (M <= 0 || N <= 0 || P <= 0)
        throw InvalidArgument("model dimensions must be positive");
    const double inf = std::numeric_limits<double>::infinity();
    lo_ = RVector::Constant(P, -inf);
    hi_ = RVector::Constant(P, inf);
}

void SensingModel::set_box(double lo, double hi) {
    lo_.setConstant(lo);
    hi_.setConstant(hi);
}

RVector SensingModel::project_feasible(const RVector& p) const {
    check_params(p, P_);
    return p.cwiseMax(lo_).cwiseMin(hi_);
}

// ---------------------------------------------------------------------------
// Fourier
// ---------------------------------------------------------------------------

FourierModel::FourierModel(int M, int N) : SensingModel(M, N, M) {}

CMatrix FourierModel::assemble(const RVector& p) const {
    check_params(p, P_);
    CMatrix A(M_, N_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M_));
    for (int m = 0; m < M_; ++m) {
        const double w = p[m];
        for (int n = 0; n < N_; ++n)
            A(m, n) = std::polar(scale, -w * static_cast<double>(n + 1));
    }
    return A;
}

CMatrix FourierModel::partial(const RVector& p, int j) const {
    if (j < 0 || j >= P_) throw InvalidArgument("parameter index out of range");
    const CMatrix A = assemble(p);
    CMatrix D = CMatrix::Zero(M_, N_);
    // Only row j depends on w_j; entrywise factor -i(n+1).
    for (int n = 0; n < N_; ++n)
        D(j, n) = Complex(0.0, -static_cast<double>(n + 1)) * A(j, n);
    return D;
}

RVector FourierModel::gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                                       const CMatrix& W) const {
    check_params(p, P_);
    RVector g = RVector::Zero(P_);
    for (int m = 0; m < M_; ++m) {
        double acc = 0.0;
        for (int n = 0; n < N_; ++n) {
            const Complex z = std::conj(W(m, n)) * A_hat(m, n);
            acc += static_cast<double>(n + 1) * z.imag();
        }
        g[m] = 2.0 * acc;
    }
    return g;
}

RVector FourierModel::random_init(std::uint64_t seed) const {
    Rng rng = Rng::stream(seed, 0x0F);
    RVector p(P_);
    for (int m = 0; m < P_; ++m) p[m] = rng.uniform(-kTwoPi / 2.0, kTwoPi / 2.0);
    return p;
}

// ---------------------------------------------------------------------------
// EM imaging
// ---------------------------------------------------------------------------

namespace {
double lattice_coord(int i, int n, double extent) {
    if (n == 1) return 0.0;
    return -0.5 * extent + extent * static_cast<double>(i) / static_cast<double>(n - 1);
}
} // namespace

EmModel::EmModel(const EmGridSpec& spec)
    : SensingModel(spec.num_antennas, spec.grid_nx * spec.grid_ny,
                   2 * spec.num_antennas),
      spec_(spec),
      k_(kTwoPi / spec.wavelength) {
    if (spec.wavelength <= 0 || spec.extent <= 0 || spec.aperture <= 0)
        throw InvalidArgument("EM geometry values must be positive");
    if (spec.antenna_height <= 0)
        throw InvalidArgument("antenna plane must be offset from the pixel plane");
    set_box(-spec.aperture, spec.aperture);
    pixels_.reserve(static_cast<std::size_t>(N_));
    for (int iy = 0; iy < spec.grid_ny; ++iy)
        for (int ix = 0; ix < spec.grid_nx; ++ix)
            pixels_.push_back({lattice_coord(ix, spec.grid_nx, spec.extent),
                               lattice_coord(iy, spec.grid_ny, spec.extent), 0.0});
}

CMatrix EmModel::assemble(const RVector& p) const {
    check_params(p, P_);
    CMatrix A(M_, N_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M_));
    const double z = spec_.antenna_height;
    for (int m = 0; m < M_; ++m) {
        const double xm = p[2 * m], ym = p[2 * m + 1];
        for (int n = 0; n < N_; ++n) {
            const auto& r = pixels_[static_cast<std::size_t>(n)];
            const double dx = xm - r[0], dy = ym - r[1], dz = z - r[2];
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            A(m, n) = std::polar(scale, -2.0 * k_ * d);
        }
    }
    return A;
}

CMatrix EmModel::partial(const RVector& p, int j) const {
    if (j < 0 || j >= P_) throw InvalidArgument("parameter index out of range");
    const CMatrix A = assemble(p);
    const int m = j / 2;
    const bool is_y = (j % 2) != 0;
    const double xm = p[2 * m], ym = p[2 * m + 1];
    const double z = spec_.antenna_height;
    CMatrix D = CMatrix::Zero(M_, N_);
    for (int n = 0; n < N_; ++n) {
        const auto& r = pixels_[static_cast<std::size_t>(n)];
        const double dx = xm - r[0], dy = ym - r[1], dz = z - r[2];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double coord = is_y ? dy : dx;
        D(m, n) = Complex(0.0, -2.0 * k_ * coord / d) * A(m, n);
    }
    return D;
}

RVector EmModel::gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                                  const CMatrix& W) const {
    check_params(p, P_);
    RVector g = RVector::Zero(P_);
    const double z = spec_.antenna_height;
    for (int m = 0; m < M_; ++m) {
        const double xm = p[2 * m], ym = p[2 * m + 1];
        double gx = 0.0, gy = 0.0;
        for (int n = 0; n < N_; ++n) {
            const auto& r = pixels_[static_cast<std::size_t>(n)];
            const double dx = xm - r[0], dy = ym - r[1], dz = z - r[2];
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            const double im = (std::conj(W(m, n)) * A_hat(m, n)).imag();
            gx += 2.0 * k_ * dx / d * im;
            gy += 2.0 * k_ * dy / d * im;
        }
        g[2 * m] = 2.0 * gx;
        g[2 * m + 1] = 2.0 * gy;
    }
    return g;
}

RVector EmModel::random_init(std::uint64_t /*seed*/) const {
    const int a = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M_))));
    if (a * a != M_)
        throw InvalidArgument("EM baseline grid needs a perfect-square antenna count, got " +
                              std::to_string(M_));
    RVector p(P_);
    for (int iy = 0; iy < a; ++iy) {
        for (int ix = 0; ix < a; ++ix) {
            const int m = iy * a + ix;
            p[2 * m] = lattice_coord(ix, a, 2.0 * spec_.aperture);
            p[2 * m + 1] = lattice_coord(iy, a, 2.0 * spec_.aperture);
        }
    }
    return p;
}

BlockStructure EmModel::block_structure(int K) const {
    if (K <= 0) throw InvalidArgument("K must be positive");
    if (N_ % K != 0)
        throw InvalidArgument("pixel count " + std::to_string(N_) +
                              " is not divisible by K = " + std::to_string(K));
    const int L = N_ / K;
    const int t = static_cast<int>(std::lround(std::sqrt(static_cast<double>(L))));
    if (t * t != L)
        throw InvalidArgument("EM blocks must be square tiles; L = " +
                              std::to_string(L) + " is not a perfect square");
    if (spec_.grid_nx % t != 0 || spec_.grid_ny % t != 0)
        throw InvalidArgument("tile side " + std::to_string(t) +
                              " does not divide the pixel lattice");
    const int tiles_x = spec_.grid_nx / t;
    std::vector<std::vector<int>> lists;
    lists.reserve(static_cast<std::size_t>(K));
    for (int by = 0; by < spec_.grid_ny / t; ++by) {
        for (int bx = 0; bx < tiles_x; ++bx) {
            std::vector<int> idx;
            idx.reserve(static_cast<std::size_t>(L));
            for (int iy = 0; iy < t; ++iy)
                for (int ix = 0; ix < t; ++ix)
                    idx.push_back((by * t + iy) * spec_.grid_nx + bx * t + ix);
            lists.push_back(std::move(idx));
        }
    }
    return make_block_structure(N_, std::move(lists));
}

// ---------------------------------------------------------------------------
// Dense
// ---------------------------------------------------------------------------

DenseModel::DenseModel(int M, int N) : SensingModel(M, N, 2 * M * N) {}

CMatrix DenseModel::assemble(const RVector& p) const {
    check_params(p, P_);
    CMatrix A(M_, N_);
    for (int n = 0; n < N_; ++n) {
        CVector f(M_);
        for (int m = 0; m < M_; ++m) {
            const int base = param_index(m, n, M_);
            f[m] = Complex(p[base], p[base + 1]);
        }
        const double s = f.norm();
        if (s < kDegenerateNorm) throw DegenerateColumnError(n);
        A.col(n) = f / s;
    }
    return A;
}

CMatrix DenseModel::partial(const RVector& p, int j) const {
    if (j < 0 || j >= P_) throw InvalidArgument("parameter index out of range");
    const int entry = j / 2;
    const bool is_imag = (j % 2) != 0;
    const int n = entry / M_;
    const int m = entry % M_;

    CVector f(M_);
    for (int mm = 0; mm < M_; ++mm) {
        const int base = param_index(mm, n, M_);
        f[mm] = Complex(p[base], p[base + 1]);
    }
    const double s = f.norm();
    if (s < kDegenerateNorm) throw DegenerateColumnError(n);
    const CVector fhat = f / s;

    // d(f/||f||) = (df - fhat * Re(fhat^H df)) / ||f||, df = e_m or i e_m.
    CVector df = CVector::Zero(M_);
    df[m] = is_imag ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    const double alpha = is_imag ? fhat[m].imag() : fhat[m].real();
    CMatrix D = CMatrix::Zero(M_, N_);
    D.col(n) = (df - alpha * fhat) / s;
    return D;
}

RVector DenseModel::gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                                     const CMatrix& W) const {
    check_params(p, P_);
    RVector g(P_);
    for (int n = 0; n < N_; ++n) {
        double s2 = 0.0;
        for (int m = 0; m < M_; ++m) {
            const int base = param_index(m, n, M_);
            s2 += p[base] * p[base] + p[base + 1] * p[base + 1];
        }
        const double s = std::sqrt(s2);
        if (s < kDegenerateNorm) throw DegenerateColumnError(n);
        const auto fhat = A_hat.col(n);
        const auto w = W.col(n);
        const double alpha = fhat.dot(w).real(); // Re(fhat^H w)
        for (int m = 0; m < M_; ++m) {
            const Complex v = (w[m] - alpha * fhat[m]) / s;
            const int base = param_index(m, n, M_);
            g[base] = 2.0 * v.real();
            g[base + 1] = 2.0 * v.imag();
        }
    }
    return g;
}

RVector DenseModel::random_init(std::uint64_t seed) const {
    Rng rng = Rng::stream(seed, 0xDE);
    RVector p(P_);
    for (int n = 0; n < N_; ++n) {
        for (int m = 0; m < M_; ++m) {
            const Complex a = rng.cnormal();
            const int base = param_index(m, n, M_);
            p[base] = a.real();
            p[base + 1] = a.imag();
        }
    }
    return p;
}

std::unique_ptr<SensingModel> make_fourier(int M, int N) {
    return std::make_unique<FourierModel>(M, N);
}

std::unique_ptr<SensingModel> make_em(const EmGridSpec& spec) {
    return std::make_unique<EmModel>(spec);
}

std::unique_ptr<SensingModel> make_dense(int M, int N) {
    return std::make_unique<DenseModel>(M, N);
}

} // namespace capmax
