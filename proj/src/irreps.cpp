#include "gdft/irreps.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "gdft/errors.hpp"
#include "gdft/kernels.hpp"

#include <nlohmann/json.hpp>

namespace gdft {

int IrrepSet::total_dim() const {
  int d = 0;
  for (const auto& r : irreps) d += r.dim;
  return d;
}

long long IrrepSet::total_entries() const {
  long long d = 0;
  for (const auto& r : irreps) d += 1LL * r.dim * r.dim;
  return d;
}

std::vector<cplx> IrrepSet::character_vector(int idx) const {
  std::vector<cplx> chi(group->order());
  for (int g = 0; g < group->order(); ++g) chi[g] = irreps[idx].character(g);
  return chi;
}

double character_inner(const std::vector<cplx>& a, const std::vector<cplx>& b,
                       const GroupPtr& g, cplx* out) {
  cplx s = 0;
  for (int x = 0; x < g->order(); ++x) s += a[x] * std::conj(b[x]);
  s /= double(g->order());
  if (out) *out = s;
  return std::abs(s);
}

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

void sort_canonically(IrrepSet& s) {
  const int n = s.group->order();
  std::vector<std::vector<cplx>> chars(s.irreps.size());
  for (std::size_t i = 0; i < s.irreps.size(); ++i) {
    chars[i].resize(n);
    for (int g = 0; g < n; ++g) chars[i][g] = s.irreps[i].character(g);
  }
  // Distinct character values are far apart relative to fp noise, so a
  // tolerant three-way compare gives a stable order.
  auto cmp = [](cplx a, cplx b) -> int {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real() ? -1 : 1;
    if (std::abs(a.imag() - b.imag()) > 1e-9) return a.imag() < b.imag() ? -1 : 1;
    return 0;
  };
  std::vector<int> order(s.irreps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (s.irreps[a].dim != s.irreps[b].dim) return s.irreps[a].dim < s.irreps[b].dim;
    for (int g = 0; g < n; ++g) {
      int c = cmp(chars[a][g], chars[b][g]);
      if (c != 0) return c < 0;
    }
    return false;
  });
  std::vector<Irrep> sorted;
  sorted.reserve(order.size());
  for (int i : order) sorted.push_back(std::move(s.irreps[i]));
  s.irreps = std::move(sorted);
  for (std::size_t i = 0; i < s.irreps.size(); ++i) s.irreps[i].id = int(i);
}

IrrepSet cyclic_irreps(const GroupPtr& g) {
  const int n = g->order();
  IrrepSet out{g, {}};
  for (int j = 0; j < n; ++j) {
    Irrep r;
    r.dim = 1;
    r.mat.resize(n, Matrix(1, 1));
    for (int k = 0; k < n; ++k) {
      double t = 2.0 * kPi * double(j) * double(k) / double(n);
      r.mat[k](0, 0) = cplx(std::cos(t), std::sin(t));
    }
    out.irreps.push_back(std::move(r));
  }
  return out;
}

IrrepSet dihedral_irreps(const GroupPtr& g) {
  const int n = g->family_parameter();
  const int m = 2 * n;
  IrrepSet out{g, {}};
  auto one_dim = [&](auto f) {
    Irrep r;
    r.dim = 1;
    r.mat.resize(m, Matrix(1, 1));
    for (int e = 0; e < m; ++e) r.mat[e](0, 0) = f(e);
    out.irreps.push_back(std::move(r));
  };
  one_dim([](int) { return 1.0; });
  one_dim([n](int e) { return e < n ? 1.0 : -1.0; });
  if (n % 2 == 0) {
    one_dim([n](int e) { return (e % n) % 2 == 0 ? 1.0 : -1.0; });
    one_dim([n](int e) {
      double v = (e % n) % 2 == 0 ? 1.0 : -1.0;
      return e < n ? v : -v;
    });
  }
  const int jmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int j = 1; j <= jmax; ++j) {
    Irrep r;
    r.dim = 2;
    r.mat.resize(m, Matrix(2, 2));
    for (int e = 0; e < m; ++e) {
      int k = e % n;
      double t = 2.0 * kPi * double(j) * double(k) / double(n);
      cplx w(std::cos(t), std::sin(t));
      if (e < n) {
        r.mat[e](0, 0) = w;
        r.mat[e](1, 1) = std::conj(w);
      } else {
        r.mat[e](0, 1) = std::conj(w);
        r.mat[e](1, 0) = w;
      }
    }
    out.irreps.push_back(std::move(r));
  }
  return out;
}

// ---- Young's orthogonal form for the symmetric groups ----

using Shape = std::vector<int>;
using Tableau = std::vector<std::vector<int>>;  // 0-based values

void partitions_rec(int n, int max_part, Shape& cur, std::vector<Shape>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(n - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<Shape> partitions(int n) {
  std::vector<Shape> out;
  Shape cur;
  partitions_rec(n, n, cur, out);
  return out;
}

// Standard tableaux generated by removing the largest value from every
// outer corner; deterministic order.
void tableaux_rec(const Shape& shape, std::vector<int>& fill, int next, Tableau& t,
                  std::vector<Tableau>& out) {
  int n = 0;
  for (int r : shape) n += r;
  if (next == n) {
    out.push_back(t);
    return;
  }
  for (std::size_t row = 0; row < shape.size(); ++row) {
    int len = fill[row];
    if (len >= shape[row]) continue;
    if (row > 0 && fill[row - 1] <= len) continue;  // must stay left-justified downward
    t[row][len] = next;
    fill[row]++;
    tableaux_rec(shape, fill, next + 1, t, out);
    fill[row]--;
  }
}

std::vector<Tableau> standard_tableaux(const Shape& shape) {
  Tableau t(shape.size());
  for (std::size_t r = 0; r < shape.size(); ++r) t[r].assign(shape[r], -1);
  std::vector<int> fill(shape.size(), 0);
  std::vector<Tableau> out;
  tableaux_rec(shape, fill, 0, t, out);
  return out;
}

// Bubble-sort decomposition into adjacent transpositions; recomposition is
// asserted so the convention cannot drift silently.
std::vector<int> adjacent_decomposition(std::vector<int> pi) {
  std::vector<int> swaps;
  const int n = int(pi.size());
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j = 0; j + 1 < n; ++j) {
      if (pi[j] > pi[j + 1]) {
        std::swap(pi[j], pi[j + 1]);
        swaps.push_back(j);
        moved = true;
      }
    }
  }
  return swaps;
}

IrrepSet symmetric_irreps(const GroupPtr& g) {
  const int n = g->family_parameter();
  const auto& perms = g->permutations();
  if (int(perms.size()) != g->order()) throw Error("symmetric group lost its permutations");
  IrrepSet out{g, {}};
  for (const auto& shape : partitions(n)) {
    auto tabs = standard_tableaux(shape);
    const int d = int(tabs.size());
    // position lookup per tableau: value -> (row, col)
    std::vector<std::vector<std::pair<int, int>>> pos(d,
                                                      std::vector<std::pair<int, int>>(n));
    std::map<Tableau, int> tab_index;
    for (int t = 0; t < d; ++t) {
      tab_index[tabs[t]] = t;
      for (std::size_t r = 0; r < tabs[t].size(); ++r)
        for (std::size_t c = 0; c < tabs[t][r].size(); ++c) pos[t][tabs[t][r][c]] = {int(r), int(c)};
    }
    // YOR matrix for each adjacent transposition (j, j+1) on values
    std::vector<Matrix> gen(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
      Matrix m(d, d);
      for (int t = 0; t < d; ++t) {
        auto [r1, c1] = pos[t][j];
        auto [r2, c2] = pos[t][j + 1];
        double dist = double((c2 - r2) - (c1 - r1));
        m(t, t) = 1.0 / dist;
        Tableau swapped = tabs[t];
        std::swap(swapped[r1][c1], swapped[r2][c2]);
        auto it = tab_index.find(swapped);
        if (it != tab_index.end()) m(it->second, t) = std::sqrt(1.0 - 1.0 / (dist * dist));
      }
      gen[j] = std::move(m);
    }
    Irrep rep;
    rep.dim = d;
    rep.mat.resize(g->order());
    for (int e = 0; e < g->order(); ++e) {
      // pi composed with tau_{a_1}..tau_{a_k} is the identity, so
      // pi = tau_{a_k} o ... o tau_{a_1} and the matrices multiply in the
      // same order. Recomposition is asserted to pin the convention.
      auto swaps = adjacent_decomposition(perms[e]);
      std::vector<int> recomposed(n);
      for (int i = 0; i < n; ++i) recomposed[i] = i;
      Matrix m = Matrix::identity(d);
      for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
        Matrix next(d, d);
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < d; ++k) {
            cplx v = m(i, k);
            if (v == cplx(0.0)) continue;
            for (int c = 0; c < d; ++c) next(i, c) += v * gen[*it](k, c);
          }
        m = std::move(next);
        std::swap(recomposed[*it], recomposed[*it + 1]);
      }
      if (recomposed != perms[e]) throw Error("adjacent decomposition drifted");
      rep.mat[e] = std::move(m);
    }
    out.irreps.push_back(std::move(rep));
  }
  return out;
}

// ---- generic construction: split the regular representation ----

Eigen::MatrixXcd random_commutant_hermitian(const GroupPtr& g, std::mt19937_64& rng) {
  const int n = g->order();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> coeff(n);
  for (int i = 0; i < n; ++i) coeff[i] = cplx(normal(rng), normal(rng));
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = coeff[g->mult(g->inv(j), i)];
  return a + a.adjoint().eval();
}

struct Cluster {
  std::vector<int> cols;
  std::vector<cplx> chi;
};

IrrepSet generic_irreps(const GroupPtr& g, std::uint64_t seed) {
  const int n = g->order();
  std::mt19937_64 rng(seed ^ g->hash());
  std::string diag;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Eigen::MatrixXcd h = random_commutant_hermitian(g, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
      diag = "eigensolver failed";
      continue;
    }
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    double scale = std::max(std::abs(vals(0)), std::abs(vals(n - 1)));
    scale = std::max(scale, 1.0);

    std::vector<Cluster> clusters;
    clusters.push_back({{0}, {}});
    for (int i = 1; i < n; ++i) {
      if (vals(i) - vals(i - 1) > 1e-6 * scale)
        clusters.push_back({{i}, {}});
      else
        clusters.back().cols.push_back(i);
    }

    // characters per cluster; left regular action L(g) e_h = e_{g h}
    bool ok = true;
    for (auto& cl : clusters) {
      cl.chi.assign(n, 0.0);
      for (int x = 0; x < n; ++x) {
        cplx t = 0;
        int xi = g->inv(x);
        for (int c : cl.cols)
          for (int i = 0; i < n; ++i) t += std::conj(vecs(i, c)) * vecs(g->mult(xi, i), c);
        cl.chi[x] = t;
      }
      cplx ip;
      character_inner(cl.chi, cl.chi, g, &ip);
      if (std::abs(ip - cplx(1.0)) > 1e-6) {
        ok = false;
        diag = "cluster irreducibility residual " + std::to_string(std::abs(ip - cplx(1.0)));
        break;
      }
    }
    if (!ok) continue;

    // dedup by character
    std::vector<const Cluster*> keep;
    for (const auto& cl : clusters) {
      bool dup = false;
      for (const auto* k : keep) {
        double md = 0;
        for (int x = 0; x < n; ++x) md = std::max(md, std::abs(cl.chi[x] - k->chi[x]));
        if (md < 1e-4) {
          dup = true;
          break;
        }
      }
      if (!dup) keep.push_back(&cl);
    }
    long long sum_sq = 0;
    for (const auto* k : keep) sum_sq += 1LL * int(k->cols.size()) * int(k->cols.size());
    if (sum_sq != n) {
      diag = "dimension accounting failed: " + std::to_string(sum_sq);
      continue;
    }

    IrrepSet out{g, {}};
    for (const auto* cl : keep) {
      const int d = int(cl->cols.size());
      Irrep rep;
      rep.dim = d;
      rep.mat.resize(n);
      Eigen::MatrixXcd q(n, d);
      for (int c = 0; c < d; ++c) q.col(c) = vecs.col(cl->cols[c]);
      Eigen::MatrixXcd qh = q.adjoint();
      for (int x = 0; x < n; ++x) {
        int xi = g->inv(x);
        Eigen::MatrixXcd lq(n, d);
        for (int i = 0; i < n; ++i) lq.row(i) = q.row(g->mult(xi, i));
        Eigen::MatrixXcd r = qh * lq;
        Matrix m(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) m(i, j) = r(i, j);
        rep.mat[x] = std::move(m);
      }
      out.irreps.push_back(std::move(rep));
    }
    return out;
  }
  throw NumericalError("irrep construction did not converge: " + diag);
}

}  // namespace

void validate_irrep_set(const IrrepSet& s) {
  const auto& g = s.group;
  const int n = g->order();
  long long sum_sq = 0;
  for (const auto& r : s.irreps) sum_sq += 1LL * r.dim * r.dim;
  if (sum_sq != n)
    throw NumericalError("irrep set incomplete: sum dim^2 = " + std::to_string(sum_sq) +
                         " for order " + std::to_string(n));
  for (const auto& r : s.irreps) {
    // unitarity
    for (int x = 0; x < n; ++x) {
      Matrix u = r.mat[x];
      double res = 0;
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) {
          cplx dot = 0;
          for (int k = 0; k < r.dim; ++k) dot += u(i, k) * std::conj(u(j, k));
          res += std::norm(dot - (i == j ? cplx(1.0) : cplx(0.0)));
        }
      if (std::sqrt(res) > 1e-9 * r.dim)
        throw NumericalError("irrep not unitary within tolerance");
    }
    // homomorphism: exhaustive up to order 128, sampled above
    auto check_pair = [&](int a, int b) {
      Matrix prod(r.dim, r.dim);
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) {
          cplx t = 0;
          for (int k = 0; k < r.dim; ++k) t += r.mat[a](i, k) * r.mat[b](k, j);
          prod(i, j) = t;
        }
      if (frob_dist(prod, r.mat[g->mult(a, b)]) > 1e-9 * r.dim)
        throw NumericalError("irrep homomorphism residual too large");
    };
    if (n <= 128) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) check_pair(a, b);
    } else {
      std::mt19937_64 rng(7);
      for (int t = 0; t < 20000; ++t) check_pair(int(rng() % n), int(rng() % n));
    }
  }
  // irreducibility + pairwise inequivalence via characters
  std::vector<std::vector<cplx>> chi(s.irreps.size());
  for (std::size_t i = 0; i < s.irreps.size(); ++i) chi[i] = s.character_vector(int(i));
  for (std::size_t i = 0; i < s.irreps.size(); ++i) {
    cplx ip;
    character_inner(chi[i], chi[i], g, &ip);
    if (std::abs(ip - cplx(1.0)) > 1e-8) throw NumericalError("character norm not 1");
    for (std::size_t j = 0; j < i; ++j)
      if (character_inner(chi[i], chi[j], g) > 1e-8)
        throw NumericalError("two irreps are equivalent");
  }
}

IrrepSet compute_irreps(const GroupPtr& g, std::uint64_t seed) {
  if (g->order() > 512) throw CapError("irrep construction capped at order 512");
  const char* cache_dir = std::getenv("GDFT_CACHE_DIR");
  if (cache_dir && *cache_dir) {
    auto cached = load_irrep_cache(g, irrep_cache_file(g, cache_dir));
    if (cached) return std::move(*cached);
  }
  IrrepSet out;
  const auto& fam = g->family();
  if (fam == "cyclic")
    out = cyclic_irreps(g);
  else if (fam == "dihedral")
    out = dihedral_irreps(g);
  else if (fam == "symmetric" && g->family_parameter() >= 2)
    out = symmetric_irreps(g);
  else
    out = generic_irreps(g, seed);
  sort_canonically(out);
  validate_irrep_set(out);
  if (cache_dir && *cache_dir) save_irrep_cache(out, irrep_cache_file(g, cache_dir));
  return out;
}

std::optional<Matrix> irrep_equivalence(const Irrep& a, const Irrep& b, const GroupPtr& g,
                                        std::uint64_t seed) {
  if (a.dim != b.dim) return std::nullopt;
  const int n = g->order();
  for (int x = 0; x < n; ++x)
    if (std::abs(a.character(x) - b.character(x)) > 1e-6) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = a.dim;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Matrix x(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x(i, j) = cplx(normal(rng), normal(rng));
    // T = sum_g a(g) X b(g)^-1 intertwines: a(h) T = T b(h)
    Matrix t(d, d);
    for (int e = 0; e < n; ++e) {
      const Matrix& ae = a.mat[e];
      const Matrix& bi = b.mat[g->inv(e)];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          cplx s = 0;
          for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) s += ae(i, p) * x(p, q) * bi(q, j);
          t(i, j) += s;
        }
    }
    if (frob_norm(t) < 1e-8 * n) continue;  // unlucky X
    // Schur: T*T = c I; rescale to unitary.
    cplx c = 0;
    for (int k = 0; k < d; ++k) c += std::conj(t(k, 0)) * t(k, 0);
    double scale = std::sqrt(c.real());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(i, j) /= scale;
    // verify
    double worst = 0;
    for (int e = 0; e < n; ++e) {
      Matrix rhs = matmul(matmul(t, b.mat[e]), adjoint(t));
      worst = std::max(worst, frob_dist(a.mat[e], rhs));
    }
    if (worst <= 1e-8 * std::max(1, d)) return t;
  }
  return std::nullopt;
}

// ---- cache ----

std::string irrep_cache_file(const GroupPtr& g, const std::string& dir) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(g->hash()));
  return dir + "/" + buf + ".json";
}

void save_irrep_cache(const IrrepSet& s, const std::string& path) {
  nlohmann::json j;
  j["order"] = s.group->order();
  j["hash"] = s.group->hash();
  j["label"] = s.group->label();
  auto& irr = j["irreps"] = nlohmann::json::array();
  for (const auto& r : s.irreps) {
    nlohmann::json e;
    e["id"] = r.id;
    e["dim"] = r.dim;
    auto& mats = e["matrices"] = nlohmann::json::array();
    for (const auto& m : r.mat) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < m.size(); ++i)
        rows.push_back({m.data()[i].real(), m.data()[i].imag()});
      mats.push_back(std::move(rows));
    }
    irr.push_back(std::move(e));
  }
  std::ofstream f(path);
  if (!f) return;  // cache is best-effort
  f << j.dump();
}

std::optional<IrrepSet> load_irrep_cache(const GroupPtr& g, const std::string& path) {
  std::ifstream f(path);
  if (!f) return std::nullopt;
  nlohmann::json j;
  try {
    f >> j;
  } catch (...) {
    return std::nullopt;
  }
  if (j.value("order", -1) != g->order() || j.value("hash", std::uint64_t(0)) != g->hash())
    return std::nullopt;
  IrrepSet out{g, {}};
  for (const auto& e : j["irreps"]) {
    Irrep r;
    r.id = e["id"].get<int>();
    r.dim = e["dim"].get<int>();
    for (const auto& rows : e["matrices"]) {
      Matrix m(r.dim, r.dim);
      if (rows.size() != m.size()) return std::nullopt;
      for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = cplx(rows[i][0].get<double>(), rows[i][1].get<double>());
      r.mat.push_back(std::move(m));
    }
    if (int(r.mat.size()) != g->order()) return std::nullopt;
    out.irreps.push_back(std::move(r));
  }
  long long sum_sq = 0;
  for (const auto& r : out.irreps) sum_sq += 1LL * r.dim * r.dim;
  if (sum_sq != g->order()) return std::nullopt;
  return out;
}

}  // namespace gdft
