#pragma once

#include <cstddef>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "thermofid/thermo_model.hpp"

// Exact dense-matrix ground truth for the fidelity approximations.
namespace thermofid::oracle {

using Matrix = Eigen::MatrixXcd;

inline constexpr Eigen::Index kMaxDimension = 256;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
// Eigenvalues below -kClampTol are an error rather than PSD drift.
inline constexpr double kClampTol = 1e-10;

class DenseHamiltonian {
 public:
  /// Throws DomainError if not square, larger than kMaxDimension or not Hermitian.
  explicit DenseHamiltonian(Matrix h);
  const Matrix& matrix() const { return h_; }
  Eigen::Index dimension() const { return h_.rows(); }

 private:
  Matrix h_;
};

class DensityMatrix {
 public:
  /// Throws DomainError unless Hermitian with unit trace and eigenvalues >= -1e-12.
  explicit DensityMatrix(Matrix rho);
  const Matrix& matrix() const { return rho_; }
  Eigen::Index dimension() const { return rho_.rows(); }

 private:
  Matrix rho_;
};

/// exp(-beta H) / Z through the eigendecomposition, max-subtracted.
DensityMatrix gibbs_state(const DenseHamiltonian& h, double beta);

/// ln Tr exp(-beta H).
double log_partition(const DenseHamiltonian& h, double beta);

/// Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)), clamped to [0, 1].
double uhlmann_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// Largest singular value.
double operator_norm(const Matrix& a);
Matrix commutator(const Matrix& a, const Matrix& b);

/// (1/12)(||[[H0,H1],H1]|| + ||[[H0,H1],H0]|| / 2).
double trotter_delta2(const DenseHamiltonian& h0, const DenseHamiltonian& h1);

/// beta^3 Delta2 exp(beta ||H0|| + beta ||H1||).
double trotter_bound(const DenseHamiltonian& h0, const DenseHamiltonian& h1,
                     double beta);

/// Uhlmann fidelity between the Gibbs states of h0 and h1 at one beta.
double fidelity_lambda_exact(const DenseHamiltonian& h0,
                             const DenseHamiltonian& h1, double beta);

/// |<gs(h0)|gs(h1)>| of the lowest eigenvectors.
double ground_state_overlap(const DenseHamiltonian& h0,
                            const DenseHamiltonian& h1);

// ---------------------------------------------------------------------------
// Builders.

/// Pauli matrix 'x', 'y', 'z' or identity 'i'.
Matrix pauli(char which);

/// Pauli matrix acting on `site` of an n-site chain of spin-1/2.
Matrix site_operator(char which, int site, int n_sites);

/// Open chain -J sum sz_i sz_{i+1} - lambda sum sx_i - h sum sz_i.
DenseHamiltonian transverse_ising_chain(int n_sites, double j, double lambda,
                                        double longitudinal = 0.0);

/// Random Hermitian matrix with Gaussian entries, scaled by 1/sqrt(dim).
Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);

/// H(lambda) = H0 + lambda V as a ThermoModel (ln Z from eigenvalues).
class DenseModel final : public ThermoModel {
 public:
  DenseModel(Matrix h0, Matrix v);
  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "dense"; }
  DenseHamiltonian hamiltonian(double lambda) const;

 private:
  Matrix h0_;
  Matrix v_;
};

}  // namespace thermofid::oracle
