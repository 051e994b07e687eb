#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdft/group.hpp"
#include "gdft/matrix.hpp"

namespace gdft {

/// A unitary matrix-valued homomorphism with no invariant subspace.
struct Irrep {
  int id = 0;
  int dim = 0;
  std::vector<Matrix> mat;  // one per group element

  const Matrix& operator()(int g) const { return mat[g]; }
  cplx character(int g) const {
    cplx t = 0;
    for (int i = 0; i < dim; ++i) t += mat[g](i, i);
    return t;
  }
};

/// A complete set of pairwise inequivalent unitary irreps: sum of dim^2
/// equals the group order. Canonical order: by dimension, then
/// lexicographic character table.
struct IrrepSet {
  GroupPtr group;
  std::vector<Irrep> irreps;

  int count() const { return int(irreps.size()); }
  /// Side length of the block-diagonal transform output (sum of dims).
  int total_dim() const;
  /// Sum of dim^2 over all irreps.
  long long total_entries() const;
  std::vector<cplx> character_vector(int idx) const;
};

/// Constructs a complete unitary irrep set. Family-specific routes for
/// cyclic, dihedral, symmetric (Young's orthogonal form) and direct-product
/// labels; everything else splits the regular representation by
/// eigenspaces of a random Hermitian commutant element (seeded, retried on
/// near-degenerate spectra). When GDFT_CACHE_DIR is set, results are cached
/// by group hash and reloaded bit-exactly.
IrrepSet compute_irreps(const GroupPtr& g, std::uint64_t seed = 0);

/// Unitary T with a(g) = T b(g) T* for all g, or nullopt when the
/// characters differ.
std::optional<Matrix> irrep_equivalence(const Irrep& a, const Irrep& b, const GroupPtr& g,
                                        std::uint64_t seed = 1);

/// Checks homomorphism, unitarity, irreducibility, completeness and
/// pairwise inequivalence; throws NumericalError with diagnostics.
void validate_irrep_set(const IrrepSet& s);

double character_inner(const std::vector<cplx>& a, const std::vector<cplx>& b,
                       const GroupPtr& g, cplx* out = nullptr);

// Cache round-trip (JSON, row-major [re,im] entries, keyed by group hash).
void save_irrep_cache(const IrrepSet& s, const std::string& path);
std::optional<IrrepSet> load_irrep_cache(const GroupPtr& g, const std::string& path);
std::string irrep_cache_file(const GroupPtr& g, const std::string& dir);

}  // namespace gdft
