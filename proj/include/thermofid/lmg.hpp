#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "thermofid/thermo_model.hpp"

// Lipkin-Meshkov-Glick model, H = -(1/N) sum_{i<j} (sx sx + gamma sy sy) - lambda sum sz,
// in units of the coupling. Exact thermodynamics from the collective-spin
// representation, plus the finite-temperature mean-field theory.
namespace thermofid::lmg {

struct LmgParams {
  int n_spins = 2;
  double gamma = 0.0;
  double lambda = 0.0;
};

/// n_spins >= 2, gamma in [0, 1], lambda >= 0 and finite.
void validate(const LmgParams& p);

/// Which total-spin multiplets enter the trace.
enum class Sectors {
  Maximal,  // S = N/2 only, dimension N + 1
  All,      // every J with its multiplicity: the full 2^N trace
};

std::string to_string(Sectors s);
Sectors parse_sectors(const std::string& s);

/// H restricted to one total-spin multiplet J, basis |J, m>, m = -J..J.
/// Nonzero entries sit on the diagonal and at (m, m +/- 2) only.
class SpinSectorMatrix {
 public:
  struct Block {
    std::vector<double> diagonal;
    std::vector<double> sub;  // size diagonal.size() - 1 (or 0)
  };

  SpinSectorMatrix(int twice_spin, std::vector<double> diagonal,
                   std::vector<double> off_diagonal);

  int twice_spin() const { return twice_spin_; }
  double spin() const { return 0.5 * twice_spin_; }
  std::size_t dimension() const { return diagonal_.size(); }
  /// Projection m of basis index i (m = -J + i).
  double m_of(std::size_t i) const { return -spin() + static_cast<double>(i); }

  double at(std::size_t i, std::size_t j) const;
  const std::vector<double>& diagonal() const { return diagonal_; }
  /// Entry (i, i + 2) for i = 0 .. dimension - 3.
  const std::vector<double>& off_diagonal() const { return off_diagonal_; }

  Eigen::MatrixXd dense() const;

  /// Even-index and odd-index blocks; each is symmetric tridiagonal.
  std::array<Block, 2> parity_blocks() const;

 private:
  int twice_spin_;
  std::vector<double> diagonal_;
  std::vector<double> off_diagonal_;
};

/// Maximal-spin multiplet S = N/2.
SpinSectorMatrix lmg_build_matrix(const LmgParams& p);

/// Multiplet of spin twice_spin / 2; twice_spin has the parity of n_spins.
SpinSectorMatrix lmg_build_sector(const LmgParams& p, int twice_spin);

/// Eigenvalues (ascending) via the two parity blocks. Throws EigensolverError.
std::vector<double> sector_eigenvalues(const SpinSectorMatrix& m);

/// ln of the number of spin-J multiplets among N spin-1/2:
/// C(N, N/2 - J) - C(N, N/2 - J - 1).
double log_spin_multiplicity(int n_spins, int twice_spin);

/// Energies of every included multiplet at one (N, gamma, lambda).
struct LmgSpectrum {
  struct Sector {
    int twice_spin = 0;
    double log_multiplicity = 0.0;
    std::vector<double> energies;
  };
  std::vector<Sector> sectors;
  double ground_energy = 0.0;

  /// ln sum_J d_J sum_k exp(-beta E_Jk).
  double log_z(double beta) const;
};

LmgSpectrum lmg_spectrum(const LmgParams& p, Sectors sectors);

/// ln Z over the maximal-spin multiplet.
double lmg_log_z(double beta, const LmgParams& p);
double lmg_log_z(double beta, const LmgParams& p, Sectors sectors);

class LmgModel final : public ThermoModel {
 public:
  LmgModel(int n_spins, double gamma, Sectors sectors = Sectors::Maximal);

  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "lmg"; }
  double size_hint() const override { return n_spins_; }

  /// Copy carrying precomputed spectra for `lambdas` (built in parallel when
  /// exec is Parallel). Values not in the list are diagonalised on demand.
  std::shared_ptr<const ThermoModel> prepared_for(
      std::span<const double> lambdas, Execution exec) const override;

  int n_spins() const { return n_spins_; }
  double gamma() const { return gamma_; }
  Sectors sectors() const { return sectors_; }

 private:
  using Cache = std::vector<std::pair<double, LmgSpectrum>>;  // sorted by lambda

  int n_spins_;
  double gamma_;
  Sectors sectors_;
  std::shared_ptr<const Cache> cache_;
};

// ---------------------------------------------------------------------------
// Mean field. Single-spin Hamiltonian -Mx sx - gamma My sy - lambda sz.

struct MeanFieldResidual {
  double x = 0.0;
  double y = 0.0;
};

/// (m_x - t m_x, m_y - t gamma m_y), t = tanh(beta s)/s, s = sqrt(l^2 + mx^2 + g^2 my^2).
/// t -> beta as s -> 0.
MeanFieldResidual lmg_meanfield_residual(double m_x, double m_y, double beta,
                                         double lambda, double gamma);

/// f = -T ln(2 cosh(beta s)) + (mx^2 + gamma^2 my^2) / 2 per spin.
double lmg_meanfield_free_energy(double m_x, double m_y, double beta,
                                 double lambda, double gamma);

enum class MeanFieldBranch { Disordered, OrderedX, OrderedY };
std::string to_string(MeanFieldBranch b);

struct MeanFieldSolution {
  double m_x = 0.0;
  double m_y = 0.0;
  double free_energy_per_spin = 0.0;
  MeanFieldBranch branch = MeanFieldBranch::Disordered;
};

/// gamma < 1 branch (M_y = 0): bisection for M_x on [1e-9, 1 - 1e-9], tolerance 1e-12.
MeanFieldSolution lmg_meanfield_solve(double beta, double lambda, double gamma);

/// T_c = lambda / atanh(lambda) on [0, 1]; 1 at lambda = 0, 0 at lambda = 1.
double lmg_meanfield_critical_temperature(double lambda);

}  // namespace thermofid::lmg
