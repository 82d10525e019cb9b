#include "qm/solver.hpp"

#include <stdexcept>

namespace colhel::qm {

ProjectedPencil orthogonalize(const ComplexSymmetricPair& pair, double cutoff) {
    const Eigen::Index n = pair.S.rows();
    if (n == 0 || pair.S.cols() != n || pair.H.rows() != n || pair.H.cols() != n)
        throw std::invalid_argument("orthogonalize: inconsistent matrix dimensions");
    if (!(cutoff > 0))
        throw std::invalid_argument("orthogonalize: cutoff must be positive");

    ProjectedPencil out;
    const bool real_overlap = pair.S.imag().cwiseAbs().maxCoeff() == 0.0;

    if (real_overlap) {
        // A diagonal shift leaves the eigenvectors of a symmetric matrix
        // unchanged and shifts the spectrum exactly; it reliably unsticks the
        // QR iteration on heavily rank-deficient Gram matrices.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        double shift = 0.0;
        for (double eps : {0.0, 1e-14, 1e-13, 1e-12}) {
            shift = eps * pair.S.real().cwiseAbs().maxCoeff();
            Eigen::MatrixXd s = pair.S.real();
            s.diagonal().array() += shift;
            es.compute(s);
            if (es.info() == Eigen::Success)
                break;
        }
        if (es.info() != Eigen::Success)
            throw std::runtime_error("orthogonalize: overlap diagonalization failed");
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < n; ++i)
            if (es.eigenvalues()[i] - shift > cutoff)
                keep.push_back(i);
        if (keep.empty())
            throw std::runtime_error("orthogonalize: basis fully degenerate below cutoff");
        Eigen::MatrixXd b(n, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k)
            b.col(static_cast<Eigen::Index>(k)) =
                es.eigenvectors().col(keep[k]) / std::sqrt(es.eigenvalues()[keep[k]] - shift);
        out.back = b.cast<Complex>();
    } else {
        // c-orthogonal decomposition: eigenvectors of a complex-symmetric
        // matrix are orthogonal under the transpose product for distinct
        // eigenvalues; normalize with v^T v.
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(pair.S);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("orthogonalize: overlap diagonalization failed");
        double max_abs = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            max_abs = std::max(max_abs, std::abs(es.eigenvalues()[i]));
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(es.eigenvalues()[i]) > cutoff * std::max(1.0, max_abs))
                keep.push_back(i);
        if (keep.empty())
            throw std::runtime_error("orthogonalize: basis fully degenerate below cutoff");
        Eigen::MatrixXcd b(n, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) {
            Eigen::VectorXcd v = es.eigenvectors().col(keep[k]);
            const Complex vtv = (v.transpose() * v)(0, 0);
            if (std::abs(vtv) < 1e-14)
                throw std::runtime_error("orthogonalize: isotropic overlap eigenvector");
            b.col(static_cast<Eigen::Index>(k)) =
                v / (std::sqrt(vtv) * std::sqrt(es.eigenvalues()[keep[k]]));
        }
        out.back = b;
    }

    out.retained = static_cast<int>(out.back.cols());
    out.dropped = static_cast<int>(n - out.back.cols());
    out.h = out.back.transpose() * pair.H * out.back;
    return out;
}

Spectrum solve_pencil(const ComplexSymmetricPair& pair, double cutoff, bool with_vectors) {
    ProjectedPencil proj = orthogonalize(pair, cutoff);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es;
    es.compute(proj.h, with_vectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("complex rotation: eigensolver failed");
    Spectrum out;
    out.values = es.eigenvalues();
    if (with_vectors)
        out.vectors = proj.back * es.eigenvectors();
    out.retained = proj.retained;
    out.dropped = proj.dropped;
    return out;
}

Spectrum complex_rotation_energies(const BasisSpec& spec, double cutoff, bool with_vectors) {
    return solve_pencil(matrix_elements(spec), cutoff, with_vectors);
}

} // namespace colhel::qm
