#include "bcap/symplectic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bcap {

SymplecticMap::SymplecticMap(Eigen::MatrixXd matrix) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0)
        throw std::invalid_argument("symplectic matrix must be 2n x 2n");
    if (symplectic_defect(m_) > kSymplecticTolerance)
        throw std::invalid_argument("matrix does not satisfy S^T Omega S = Omega");
}

double SymplecticMap::symplectic_defect(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows()) / 2;
    const Eigen::MatrixXd omega = symplectic_form(n);
    return (m.transpose() * omega * m - omega).cwiseAbs().maxCoeff();
}

SymplecticMap SymplecticMap::identity(int n_modes) {
    return SymplecticMap(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticMap SymplecticMap::single_mode_squeezer(double r) {
    Eigen::MatrixXd m(2, 2);
    m << std::exp(-r), 0.0, 0.0, std::exp(r);
    return SymplecticMap(m);
}

SymplecticMap SymplecticMap::phase_rotation(double phi) {
    Eigen::MatrixXcd u(1, 1);
    u(0, 0) = std::exp(std::complex<double>(0.0, phi));
    return from_unitary(u);
}

SymplecticMap SymplecticMap::two_mode_beamsplitter(double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("transmissivity must be in [0,1]");
    Eigen::MatrixXcd u(2, 2);
    const double c = std::sqrt(eta), s = std::sqrt(1.0 - eta);
    u << c, s, -s, c;
    return from_unitary(u);
}

SymplecticMap SymplecticMap::from_unitary(const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("unitary must be square");
    const int n = static_cast<int>(u.rows());
    if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("matrix is not unitary");
    // With the gamma -> S^T gamma S action, amplitudes transform as
    // alpha -> U alpha when S = [[X^T, Y^T], [-Y^T, X^T]].
    Eigen::MatrixXd m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = u.real().transpose();
    m.topRightCorner(n, n) = u.imag().transpose();
    m.bottomLeftCorner(n, n) = -u.imag().transpose();
    m.bottomRightCorner(n, n) = u.real().transpose();
    return SymplecticMap(std::move(m));
}

SymplecticMap SymplecticMap::embed(int n_modes, const std::vector<int>& modes,
                                   const SymplecticMap& small) {
    if (static_cast<int>(modes.size()) != small.n_modes())
        throw std::invalid_argument("mode list must match the embedded map");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const int k = small.n_modes();
    auto global = [&](int local) {  // local xxpp index -> global xxpp index
        return local < k ? modes[local] : n_modes + modes[local - k];
    };
    for (int r = 0; r < 2 * k; ++r)
        for (int c = 0; c < 2 * k; ++c) m(global(r), global(c)) = small.matrix()(r, c);
    return SymplecticMap(std::move(m));
}

SymplecticMap SymplecticMap::then(const SymplecticMap& other) const {
    return SymplecticMap(m_ * other.matrix());
}

GaussianState SymplecticMap::apply(const GaussianState& state) const {
    if (state.n_modes() != n_modes()) throw std::invalid_argument("mode count mismatch");
    return GaussianState(m_.transpose() * state.cov() * m_, m_.transpose() * state.disp());
}

bool SymplecticMap::is_orthogonal(double tol) const {
    const int d = static_cast<int>(m_.rows());
    return (m_.transpose() * m_ - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXd EulerDecomposition::middle() const {
    const int n = static_cast<int>(squeezes.size());
    Eigen::VectorXd diag(2 * n);
    for (int i = 0; i < n; ++i) {
        diag(i) = std::exp(squeezes(i));
        diag(n + i) = std::exp(-squeezes(i));
    }
    return diag.asDiagonal();
}

Eigen::MatrixXd EulerDecomposition::reconstruct() const {
    return o.matrix() * middle() * o_prime.matrix();
}

namespace {

// Flip the sign of v so its largest-magnitude entry is positive; keeps the
// factors deterministic across runs and platforms.
void canonicalize_sign(Eigen::VectorXd& v) {
    int idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0.0) v = -v;
}

}  // namespace

EulerDecomposition euler_decompose(const SymplecticMap& s) {
    const int n = s.n_modes();
    const int d = 2 * n;
    const Eigen::MatrixXd omega = symplectic_form(n);
    const Eigen::MatrixXd a = s.matrix().transpose() * s.matrix();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const Eigen::VectorXd lam = es.eigenvalues();  // ascending
    const Eigen::MatrixXd vec = es.eigenvectors();

    // Pair eigenvalues (lambda, 1/lambda). For lambda > 1 the partner
    // eigenvector is -Omega v; the near-unit subspace needs an explicit
    // symplectically adapted basis.
    std::vector<bool> used(d, false);
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return lam(i) > lam(j); });

    constexpr double kUnitTol = 1e-9;
    Eigen::MatrixXd u(d, d);
    Eigen::VectorXd squeezes(n);
    int filled = 0;

    for (int oi : order) {
        if (used[oi] || lam(oi) <= 1.0 + kUnitTol) continue;
        used[oi] = true;
        Eigen::VectorXd v = vec.col(oi);
        canonicalize_sign(v);
        // Reserve the numerically matching reciprocal eigenvalue slot.
        int partner = -1;
        double best = 1e300;
        for (int j = 0; j < d; ++j) {
            if (used[j]) continue;
            const double diff = std::abs(lam(j) - 1.0 / lam(oi));
            if (diff < best) {
                best = diff;
                partner = j;
            }
        }
        if (partner < 0) throw std::runtime_error("unpaired symplectic eigenvalue");
        used[partner] = true;
        u.col(filled) = v;
        u.col(n + filled) = -omega * v;
        squeezes(filled) = 0.5 * std::log(lam(oi));
        ++filled;
    }

    // Remaining columns span the lambda ~ 1 eigenspace; build (v, -Omega v)
    // pairs inside it by projection.
    std::vector<Eigen::VectorXd> basis;
    for (int j = 0; j < d; ++j)
        if (!used[j]) basis.push_back(vec.col(j));
    while (filled < n) {
        if (basis.empty()) throw std::runtime_error("symplectic pairing exhausted the basis");
        Eigen::VectorXd v = basis.front();
        canonicalize_sign(v);
        v.normalize();
        Eigen::VectorXd w = -omega * v;
        u.col(filled) = v;
        u.col(n + filled) = w;
        squeezes(filled) = 0.0;
        ++filled;
        std::vector<Eigen::VectorXd> next;
        for (auto& b : basis) {
            Eigen::VectorXd proj = b - v * v.dot(b) - w * w.dot(b);
            if (proj.norm() > 1e-8) next.push_back(proj.normalized());
        }
        basis = std::move(next);
    }

    // S = (S U D^{-1/2}) * D^{1/2} * U^T with D = diag(lam, 1/lam).
    Eigen::VectorXd half(d);
    for (int i = 0; i < n; ++i) {
        half(i) = std::exp(squeezes(i));
        half(n + i) = std::exp(-squeezes(i));
    }
    const Eigen::MatrixXd o = s.matrix() * u * half.cwiseInverse().asDiagonal();

    return EulerDecomposition{SymplecticMap(o), squeezes, SymplecticMap(u.transpose())};
}

SymplecticMap random_orthogonal_symplectic(int n_modes, Rng& rng) {
    Eigen::MatrixXcd g(n_modes, n_modes);
    for (int r = 0; r < n_modes; ++r)
        for (int c = 0; c < n_modes; ++c) g(r, c) = std::complex<double>(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase fix so that the distribution is Haar rather than QR-biased.
    for (int c = 0; c < n_modes; ++c) {
        const std::complex<double> rcc = r(c, c);
        const double mag = std::abs(rcc);
        q.col(c) *= mag > 0.0 ? rcc / mag : 1.0;
    }
    return SymplecticMap::from_unitary(q);
}

SymplecticMap random_symplectic(int n_modes, Rng& rng, double max_squeeze) {
    SymplecticMap total = random_orthogonal_symplectic(n_modes, rng);
    for (int layer = 0; layer < 2; ++layer) {
        for (int mode = 0; mode < n_modes; ++mode) {
            const double r = rng.uniform(-max_squeeze, max_squeeze);
            total = total.then(
                SymplecticMap::embed(n_modes, {mode}, SymplecticMap::single_mode_squeezer(r)));
        }
        total = total.then(random_orthogonal_symplectic(n_modes, rng));
    }
    return total;
}

}  // namespace bcap
