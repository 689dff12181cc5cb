#ifndef CAPMAX_MODELS_HPP
#define CAPMAX_MODELS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "capmax/blocks.hpp"
#include "capmax/types.hpp"

namespace capmax {

/// Parametric sensing model A = F(p): a differentiable map from P real
/// design scalars to an M x N complex matrix with unit-norm columns, plus
/// box feasibility bounds on p.
class SensingModel {
  public:
    virtual ~SensingModel() = default;

    int rows() const { return M_; }
    int cols() const { return N_; }
    int num_params() const { return P_; }
    const RVector& lower_bounds() const { return lo_; }
    const RVector& upper_bounds() const { return hi_; }
    virtual std::string kind() const = 0;

    /// Column-normalized sensing matrix at p.
    virtual CMatrix assemble(const RVector& p) const = 0;

    /// Derivative of the normalized matrix with respect to p[j].
    virtual CMatrix partial(const RVector& p, int j) const = 0;

    /// All partials folded against a weight matrix in one pass:
    /// g[j] = 2 Re <W, dA/dp_j>_F. A_hat must equal assemble(p).
    virtual RVector gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                                     const CMatrix& W) const = 0;

    /// Componentwise clamp of p onto the feasible box.
    RVector project_feasible(const RVector& p) const;

    /// Baseline parameter vector: random frequencies (Fourier), the uniform
    /// antenna grid (EM, seed ignored), or complex-normal entries (dense).
    virtual RVector random_init(std::uint64_t seed) const = 0;

  protected:
    SensingModel(int M, int N, int P);
    void set_box(double lo, double hi);

    int M_, N_, P_;
    RVector lo_, hi_;
};

/// Incomplete-Fourier model: entry (m, n) = exp(-i w_m (n+1)) / sqrt(M),
/// one unbounded frequency per row.
class FourierModel final : public SensingModel {
  public:
    FourierModel(int M, int N);
    std::string kind() const override { return "fourier"; }
    CMatrix assemble(const RVector& p) const override;
    CMatrix partial(const RVector& p, int j) const override;
    RVector gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                             const CMatrix& W) const override;
    RVector random_init(std::uint64_t seed) const override;
};

/// Geometry of the monostatic imaging problem: a rectangular pixel lattice
/// on z = 0 and movable antennas on the plane z = antenna_height, all
/// lengths in wavelengths.
struct EmGridSpec {
    int grid_nx = 12;
    int grid_ny = 12;
    double extent = 5.0;
    double antenna_height = 5.0;
    double aperture = 2.5;
    int num_antennas = 64;
    double wavelength = 1.0;
};

/// Round-trip phase model: entry (m, n) = exp(-i 2k ||r_m - r_n||) / sqrt(M)
/// with p = (x_m, y_m) per antenna, |x_m|, |y_m| <= aperture.
class EmModel final : public SensingModel {
  public:
    explicit EmModel(const EmGridSpec& spec);
    std::string kind() const override { return "em"; }
    CMatrix assemble(const RVector& p) const override;
    CMatrix partial(const RVector& p, int j) const override;
    RVector gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                             const CMatrix& W) const override;
    RVector random_init(std::uint64_t seed) const override;

    const EmGridSpec& grid() const { return spec_; }
    double wavenumber() const { return k_; }
    /// Pixel n position, row-major over the lattice (n = iy*nx + ix).
    const std::vector<std::array<double, 3>>& pixels() const { return pixels_; }

    /// Spatial square blocks: tiles of side sqrt(N/K) in the pixel lattice,
    /// row-major over tiles. Throws if the tiling does not exist.
    BlockStructure block_structure(int K) const;

  private:
    EmGridSpec spec_;
    double k_;
    std::vector<std::array<double, 3>> pixels_;
};

/// Fully free model: p holds (Re a_mn, Im a_mn) for every entry, and
/// assemble applies true column-wise normalization.
class DenseModel final : public SensingModel {
  public:
    DenseModel(int M, int N);
    std::string kind() const override { return "dense"; }
    CMatrix assemble(const RVector& p) const override;
    CMatrix partial(const RVector& p, int j) const override;
    RVector gradient_adjoint(const RVector& p, const CMatrix& A_hat,
                             const CMatrix& W) const override;
    RVector random_init(std::uint64_t seed) const override;

    /// p-vector slot of Re a_mn; the Im slot follows it.
    static int param_index(int m, int n, int M) { return 2 * (n * M + m); }
};

std::unique_ptr<SensingModel> make_fourier(int M, int N);
std::unique_ptr<SensingModel> make_em(const EmGridSpec& spec);
std::unique_ptr<SensingModel> make_dense(int M, int N);

} // namespace capmax

#endif
