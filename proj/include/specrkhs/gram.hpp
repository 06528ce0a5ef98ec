#pragma once

#include <string>
#include <vector>

#include "specrkhs/dynamics.hpp"
#include "specrkhs/kernels.hpp"
#include "specrkhs/types.hpp"

namespace specrkhs {

// G_jk = K(x_k, x_j), A_jk = K(y_k, x_j), R_jk = K(y_k, y_j).
struct GramTriple {
    Mat G, A, R;
    std::string provenance;  // JSON object: kernel, snapshot hash, assembly path

    Eigen::Index size() const { return G.rows(); }
    bool real() const { return is_real(G) && is_real(A) && is_real(R); }
};

// Deterministic snapshots use the direct formulas; S > 1 successor samples average A over
// samples and R over all ordered sample pairs (including s = s').
GramTriple build_gram(const SnapshotSet& snapshots, const KernelSpec& kernel);

// Markov chains: exact expectations over the transition rows instead of sampled successors.
GramTriple build_gram_exact_chain(const SystemSpec& chain, const std::vector<long long>& states,
                                  const KernelSpec& kernel);

struct CompressedBasis {
    Eigen::Index r = 0;
    Mat U;        // N x r dominant eigenvectors of G (descending eigenvalue order)
    RVec sigma;   // r square roots of the retained eigenvalues
    Mat khat_t;   // r x r: matrix of P K^* P in the orthonormal basis u_j
    Mat khat;     // transpose of khat_t

    Mat W() const;  // U Sigma^{-1}; columns are the coefficient vectors of u_j
};

CompressedBasis compress(const GramTriple& gram, Eigen::Index r, double threshold = kDefaultTruncation);

// (g_u)_j = <g, u_j> for g = sum_i c_i K_{x_i}.
Vec to_u_basis(const Vec& c, const CompressedBasis& basis, const GramTriple& gram);

std::string serialize_gram(const GramTriple& gram);
GramTriple deserialize_gram(const std::string& bytes);
void save_gram(const std::string& path, const GramTriple& gram);
GramTriple load_gram(const std::string& path);

} // namespace specrkhs
