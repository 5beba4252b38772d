#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bcap/gaussian_state.hpp"
#include "bcap/rng.hpp"

namespace bcap {

/// Real symplectic matrix in xxpp ordering, S^T Omega S = Omega.
/// Acts on states as gamma -> S^T gamma S, d -> S^T d, so "A then B"
/// composes to the matrix product A*B.
class SymplecticMap {
  public:
    explicit SymplecticMap(Eigen::MatrixXd matrix);

    static SymplecticMap identity(int n_modes);
    /// gamma -> S^T gamma S with S = diag(e^-r, e^r): squeezes the x
    /// quadrature for r > 0.
    static SymplecticMap single_mode_squeezer(double r);
    static SymplecticMap phase_rotation(double phi);
    /// Two-mode beamsplitter; mode 1 keeps sqrt(eta) of its amplitude.
    static SymplecticMap two_mode_beamsplitter(double eta);
    /// Real representation of an n x n unitary (a passive linear-optics
    /// circuit); the result is orthogonal symplectic.
    static SymplecticMap from_unitary(const Eigen::MatrixXcd& u);
    /// Embeds a k-mode map into n modes acting on the given mode indices.
    static SymplecticMap embed(int n_modes, const std::vector<int>& modes,
                               const SymplecticMap& small);

    const Eigen::MatrixXd& matrix() const { return m_; }
    int n_modes() const { return static_cast<int>(m_.rows()) / 2; }

    /// this followed by other.
    SymplecticMap then(const SymplecticMap& other) const;

    GaussianState apply(const GaussianState& state) const;

    bool is_orthogonal(double tol = kSymplecticTolerance) const;

    /// Max abs entry of S^T Omega S - Omega.
    static double symplectic_defect(const Eigen::MatrixXd& m);

  private:
    Eigen::MatrixXd m_;
};

/// Euler (Bloch-Messiah) factors: S = O * diag(e^{r_1}..e^{r_n},
/// e^{-r_1}..e^{-r_n}) * O_prime with O, O_prime orthogonal symplectic and
/// the squeezing parameters sorted descending.
struct EulerDecomposition {
    SymplecticMap o;
    Eigen::VectorXd squeezes;
    SymplecticMap o_prime;

    Eigen::MatrixXd middle() const;       // diag(e^r, e^-r)
    Eigen::MatrixXd reconstruct() const;  // o * middle * o_prime
};

EulerDecomposition euler_decompose(const SymplecticMap& s);

/// Haar-like orthogonal symplectic sample: QR of a complex Ginibre matrix
/// mapped to its real representation.
SymplecticMap random_orthogonal_symplectic(int n_modes, Rng& rng);

/// Random symplectic built as an alternating product of passive circuits
/// and single-mode squeezers with |r| <= max_squeeze.
SymplecticMap random_symplectic(int n_modes, Rng& rng, double max_squeeze = 1.0);

}  // namespace bcap
