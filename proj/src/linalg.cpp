#include "specrkhs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "specrkhs/text_io.hpp"

namespace specrkhs {

namespace {

void check_square(const Mat& M, const char* what) {
    if (M.rows() != M.cols()) throw InvalidInput(std::string(what) + ": matrix must be square");
}

void check_info(lapack_int info, const char* routine) {
    if (info != 0) throw NumericalError(std::string(routine) + " failed with info=" + std::to_string(info));
}

// 0 for diagonal, 1 for tridiagonal, 2 for anything wider (lower triangle only).
int bandwidth(const Mat& H) {
    int band = 0;
    for (Eigen::Index j = 0; j < H.cols(); ++j)
        for (Eigen::Index i = j + 1; i < H.rows(); ++i)
            if (H(i, j) != cplx(0.0, 0.0)) {
                if (i > j + 1) return 2;
                band = 1;
            }
    return band;
}

} // namespace

HermitianEig eigh(const Mat& H, bool want_vectors) {
    check_square(H, "eigh");
    const lapack_int n = static_cast<lapack_int>(H.rows());
    HermitianEig out;
    out.values.resize(n);
    if (n == 0) return out;
    const char jobz = want_vectors ? 'V' : 'N';
    const auto band = bandwidth(H);
    if (band == 0) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return H(a, a).real() < H(b, b).real(); });
        if (want_vectors) out.vectors = Mat::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const Eigen::Index i = order[static_cast<std::size_t>(k)];
            out.values(k) = H(i, i).real();
            if (want_vectors) out.vectors(i, k) = 1.0;
        }
        return out;
    }
    if (band == 1 && is_real(H)) {
        RVec d = H.diagonal().real();
        RVec e = H.diagonal(-1).real();
        RMat z(want_vectors ? n : 1, want_vectors ? n : 1);
        check_info(LAPACKE_dstevd(LAPACK_COL_MAJOR, jobz, n, d.data(), e.data(), z.data(), z.rows()), "dstevd");
        out.values = d;
        if (want_vectors) out.vectors = z.cast<cplx>();
        return out;
    }
    if (is_real(H)) {
        RMat a = H.real();
        check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, out.values.data()), "dsyevd");
        if (want_vectors) out.vectors = a.cast<cplx>();
    } else {
        Mat a = H;
        check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, out.values.data()), "zheevd");
        if (want_vectors) out.vectors = std::move(a);
    }
    return out;
}

std::pair<double, Vec> eigh_smallest(const Mat& H) {
    check_square(H, "eigh_smallest");
    const lapack_int n = static_cast<lapack_int>(H.rows());
    if (n == 0) throw InvalidInput("eigh_smallest: empty matrix");
    lapack_int found = 0;
    double w[1];
    std::vector<lapack_int> support(2);
    if (is_real(H)) {
        RMat a = H.real();
        RVec z(n);
        std::vector<double> wall(static_cast<std::size_t>(n));
        check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0, &found,
                                  wall.data(), z.data(), n, support.data()),
                   "dsyevr");
        return {wall[0], z.cast<cplx>()};
    }
    Mat a = H;
    Vec z(n);
    std::vector<double> wall(static_cast<std::size_t>(n));
    check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0, &found,
                              wall.data(), z.data(), n, support.data()),
               "zheevr");
    w[0] = wall[0];
    return {w[0], z};
}

GeneralEig eig_general(const Mat& M) {
    check_square(M, "eig_general");
    const lapack_int n = static_cast<lapack_int>(M.rows());
    GeneralEig out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    if (n == 0) return out;
    if (is_real(M)) {
        RMat a = M.real();
        RVec wr(n), wi(n);
        RMat vr(n, n);
        double dummy = 0.0;
        check_info(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, wr.data(), wi.data(), &dummy, 1,
                                 vr.data(), n),
                   "dgeev");
        for (lapack_int j = 0; j < n; ++j) {
            if (wi(j) == 0.0) {
                out.values(j) = wr(j);
                out.vectors.col(j) = vr.col(j).cast<cplx>();
            } else {
                out.values(j) = cplx(wr(j), wi(j));
                out.values(j + 1) = cplx(wr(j + 1), wi(j + 1));
                for (lapack_int i = 0; i < n; ++i) {
                    out.vectors(i, j) = cplx(vr(i, j), vr(i, j + 1));
                    out.vectors(i, j + 1) = cplx(vr(i, j), -vr(i, j + 1));
                }
                ++j;
            }
        }
        return out;
    }
    Mat a = M;
    cplx dummy;
    check_info(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, out.values.data(), &dummy, 1,
                             out.vectors.data(), n),
               "zgeev");
    return out;
}

Mat multiply(const Mat& A, const Mat& X) {
    if (A.cols() != X.rows()) throw InvalidInput("multiply: inner dimensions differ");
    const bool ra = is_real(A), rx = is_real(X);
    if (ra && rx) return (A.real() * X.real()).cast<cplx>();
    if (ra) {
        RMat ar = A.real();
        Mat out(A.rows(), X.cols());
        out.real() = ar * X.real();
        out.imag() = ar * X.imag();
        return out;
    }
    if (rx) {
        RMat xr = X.real();
        Mat out(A.rows(), X.cols());
        out.real() = A.real() * xr;
        out.imag() = A.imag() * xr;
        return out;
    }
    return A * X;
}

double hermitian_norm(const Mat& H) {
    if (H.size() == 0) return 0.0;
    RVec v = eigh(H, false).values;
    return std::max(std::fabs(v(0)), std::fabs(v(v.size() - 1)));
}

double spectral_norm(const Mat& M) {
    if (M.size() == 0) return 0.0;
    Mat gram = M.adjoint() * M;
    gram = 0.5 * (gram + gram.adjoint()).eval();
    RVec v = eigh(gram, false).values;
    return std::sqrt(std::max(0.0, v(v.size() - 1)));
}

// ---------------------------------------------------------------- pencils

GeneralizedEigResult hermitian_definite_geig(const Mat& B, const Mat& C, double threshold) {
    check_square(B, "hermitian_definite_geig");
    check_square(C, "hermitian_definite_geig");
    if (B.rows() != C.rows()) throw InvalidInput("hermitian_definite_geig: B and C differ in size");
    const Eigen::Index n = B.rows();
    GeneralizedEigResult out;
    out.hermitian = true;
    if (n == 0) return out;

    RVec cvals = eigh(C, false).values;
    const double cmax = cvals(n - 1), cmin = cvals(0);
    if (!(cmax > 0.0) || !(cmin > threshold * cmax))
        throw NumericalError("hermitian_definite_geig: C is not positive definite beyond tolerance; smallest eigenvalue " +
                             format_double(cmin) + " (largest " + format_double(cmax) + ")");

    Eigen::LLT<Mat> llt(C);
    if (llt.info() != Eigen::Success)
        throw NumericalError("hermitian_definite_geig: Cholesky factorisation failed; smallest eigenvalue " +
                             format_double(cmin));
    const auto L = llt.matrixL();
    Mat tmp = L.solve(B);                                   // L^{-1} B
    Mat reduced = L.solve(tmp.adjoint()).adjoint();          // L^{-1} B L^{-*}
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    HermitianEig e = eigh(reduced);
    out.eigenvalues = e.values.cast<cplx>();
    out.eigenvectors = llt.matrixU().solve(e.vectors);      // L^{-*} W
    out.sigma_inf = cmin;
    out.rank = n;
    return out;
}

std::pair<double, Vec> smallest_geig_pair(const Mat& B, const Mat& C, double threshold) {
    check_square(B, "smallest_geig_pair");
    if (B.rows() != C.rows() || C.rows() != C.cols()) throw InvalidInput("smallest_geig_pair: size mismatch");
    RVec cvals = eigh(C, false).values;
    const Eigen::Index n = C.rows();
    if (n == 0) throw InvalidInput("smallest_geig_pair: empty pencil");
    if (!(cvals(n - 1) > 0.0) || !(cvals(0) > threshold * cvals(n - 1)))
        throw NumericalError("smallest_geig_pair: C is not positive definite beyond tolerance; smallest eigenvalue " +
                             format_double(cvals(0)));
    Eigen::LLT<Mat> llt(C);
    if (llt.info() != Eigen::Success) throw NumericalError("smallest_geig_pair: Cholesky factorisation failed");
    const auto L = llt.matrixL();
    Mat tmp = L.solve(B);
    Mat reduced = L.solve(tmp.adjoint()).adjoint();
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    auto [mu, w] = eigh_smallest(reduced);
    Vec v = llt.matrixU().solve(w);
    return {mu, v};
}

GeneralizedEigResult general_geig(const Mat& A, const Mat& G, double threshold, Eigen::Index max_rank) {
    check_square(A, "general_geig");
    check_square(G, "general_geig");
    if (A.rows() != G.rows()) throw InvalidInput("general_geig: A and G differ in size");
    HermitianEig ge = eigh(G);
    const Eigen::Index n = G.rows();
    const double lmax = n > 0 ? ge.values(n - 1) : 0.0;
    Eigen::Index keep = 0;
    while (keep < n && ge.values(n - 1 - keep) > threshold * lmax && lmax > 0.0) ++keep;
    if (max_rank > 0) keep = std::min(keep, max_rank);
    if (keep == 0) throw NumericalError("general_geig: numerical rank of G is zero");

    Mat W = ge.vectors.rightCols(keep).rowwise().reverse();
    RVec sig = ge.values.tail(keep).reverse().cwiseSqrt();
    for (Eigen::Index j = 0; j < keep; ++j) W.col(j) /= sig(j);
    Mat reduced = W.adjoint() * multiply(A, W);
    GeneralEig e = eig_general(reduced);

    GeneralizedEigResult out;
    out.eigenvalues = e.values;
    out.eigenvectors = W * e.vectors;
    out.sigma_inf = ge.values(n - keep);
    out.rank = keep;
    return out;
}

double perturbed_geig_bound(double normH, double dH, double dG, double sigma_inf_G) {
    if (!(sigma_inf_G > 0.0)) throw NumericalError("perturbed_geig_bound: sigma_inf must be positive");
    if (!(dG < sigma_inf_G)) throw NumericalError("perturbed_geig_bound: certificate unavailable (dG >= sigma_inf)");
    const double s = sigma_inf_G;
    return dH / s + (normH + dH) / (s * (s - dG)) * dG;
}

Mat solve_least_squares(const Mat& M, const Mat& beta, double threshold) {
    check_square(M, "solve_least_squares");
    if (M.rows() != beta.rows()) throw InvalidInput("solve_least_squares: dimension mismatch");
    const Eigen::Index n = M.rows();
    Mat out = Mat::Zero(n, beta.cols());
    if (n == 0) return out;
    Mat sym = 0.5 * (M + M.adjoint());
    HermitianEig e = eigh(sym);
    const double lmax = e.values(n - 1);
    if (!(lmax > 0.0)) return out;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < n; ++i)
        if (e.values(i) > threshold * lmax) kept.push_back(i);
    Mat V(n, static_cast<Eigen::Index>(kept.size()));
    RVec inv(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
        V.col(static_cast<Eigen::Index>(j)) = e.vectors.col(kept[j]);
        inv(static_cast<Eigen::Index>(j)) = 1.0 / e.values(kept[j]);
    }
    Mat proj = V.adjoint() * beta;
    proj = inv.asDiagonal() * proj;
    return V * proj;
}

Vec solve_least_squares(const Mat& M, const Vec& beta, double threshold) {
    Mat b = beta;
    return solve_least_squares(M, b, threshold).col(0);
}

// ---------------------------------------------------------------- reduction

PencilReduction::PencilReduction(const Mat& G, double threshold) {
    check_square(G, "PencilReduction");
    const Eigen::Index n = G.rows();
    if (n == 0) throw InvalidInput("PencilReduction: empty matrix");
    Mat sym = 0.5 * (G + G.adjoint());
    HermitianEig e = eigh(sym);
    lambda_max_ = e.values(n - 1);
    if (!(lambda_max_ > 0.0)) throw NumericalError("PencilReduction: G has no positive eigenvalues");
    const double cutoff = threshold * lambda_max_;
    if (e.values(0) > cutoff) {
        Eigen::LLT<Mat> llt(sym);
        if (llt.info() == Eigen::Success) {
            cholesky_ = true;
            sigma_inf_ = e.values(0);
            T_ = llt.matrixU().solve(Mat::Identity(n, n));  // L^{-*}
            return;
        }
    }
    Eigen::Index keep = 0;
    while (keep < n && e.values(n - 1 - keep) > cutoff) ++keep;
    T_ = e.vectors.rightCols(keep).rowwise().reverse();
    RVec sig = e.values.tail(keep).reverse().cwiseSqrt();
    for (Eigen::Index j = 0; j < keep; ++j) T_.col(j) /= sig(j);
    sigma_inf_ = e.values(n - keep);
}

Mat PencilReduction::reduce(const Mat& M) const {
    Mat out = T_.adjoint() * multiply(M, T_);
    return out;
}

} // namespace specrkhs
