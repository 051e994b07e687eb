#include <numeric>

#include "gdft/errors.hpp"
#include "gdft/group.hpp"

namespace gdft {

namespace {

GroupPtr cyclic_group(int n) {
  if (n < 1) throw ParseError("cyclic order must be >= 1");
  // element k = rotation by k
  std::vector<int> table(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[std::size_t(a) * n + b] = (a + b) % n;
  return FiniteGroup::from_mult_table(n, std::move(table), "C" + std::to_string(n), {},
                                      "cyclic", n);
}

GroupPtr dihedral_group(int n) {
  if (n < 1) throw ParseError("dihedral parameter must be >= 1");
  // elements 0..n-1: rotations r^k; n..2n-1: reflections s*r^k
  const int m = 2 * n;
  auto enc = [n](bool refl, int k) { return (refl ? n : 0) + ((k % n) + n) % n; };
  std::vector<int> table(std::size_t(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      bool ra = a >= n, rb = b >= n;
      int ka = a % n, kb = b % n;
      // s r^k s = r^-k; (s r^a)(s r^b) = r^(b-a); r^a (s r^b) = s r^(b-a)... derive:
      // treat s r^k as the map x -> s(r^k(x)). Compose left-to-right.
      int k, r;
      if (!ra && !rb) {
        r = 0;
        k = ka + kb;
      } else if (!ra && rb) {
        r = 1;
        k = kb - ka;
      } else if (ra && !rb) {
        r = 1;
        k = ka + kb;
      } else {
        r = 0;
        k = kb - ka;
      }
      table[std::size_t(a) * m + b] = enc(r, k);
    }
  return FiniteGroup::from_mult_table(m, std::move(table), "D" + std::to_string(n), {},
                                      "dihedral", n);
}

GroupPtr symmetric_group(int n) {
  if (n < 1 || n > 7) throw ParseError("symmetric parameter out of supported range");
  if (n == 1) return cyclic_group(1);
  std::vector<int> swap01(n), cycle(n);
  std::iota(swap01.begin(), swap01.end(), 0);
  std::swap(swap01[0], swap01[1]);
  for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
  return group_from_generators(n, {cycle, swap01}, "S" + std::to_string(n), 5000, "symmetric", n);
}

GroupPtr alternating_group(int n) {
  if (n < 3 || n > 7) throw ParseError("alternating parameter out of supported range");
  std::vector<std::vector<int>> gens;
  // 3-cycles (0 1 k) generate A_n
  for (int k = 2; k < n; ++k) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    p[0] = 1;
    p[1] = k;
    p[k] = 0;
    gens.push_back(std::move(p));
  }
  return group_from_generators(n, gens, "A" + std::to_string(n));
}

GroupPtr quaternion8() {
  // elements: 0:1 1:i 2:j 3:k 4:-1 5:-i 6:-j 7:-k
  auto enc = [](int sign, int basis) { return sign * 4 + basis; };
  // basis products with sign: i*j=k, j*k=i, k*i=j, x*x=-1 for x in {i,j,k}
  static const int prod_basis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int prod_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<int> table(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int sa = a / 4, ba = a % 4, sb = b / 4, bb = b % 4;
      int s = (sa + sb + prod_sign[ba][bb]) % 2;
      table[std::size_t(a) * 8 + b] = enc(s, prod_basis[ba][bb]);
    }
  return FiniteGroup::from_mult_table(8, std::move(table), "Q8");
}

GroupPtr heisenberg_group(int p) {
  if (p < 2 || p > 13) throw ParseError("heisenberg parameter out of supported range");
  // upper unitriangular 3x3 over F_p; element (a,b,c) = [[1,a,c],[0,1,b],[0,0,1]]
  // index a*p^2 + b*p + c
  const int n = p * p * p;
  auto enc = [p](int a, int b, int c) { return (a * p + b) * p + c; };
  std::vector<int> table(std::size_t(n) * n);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int a2 = 0; a2 < p; ++a2)
          for (int b2 = 0; b2 < p; ++b2)
            for (int c2 = 0; c2 < p; ++c2)
              table[std::size_t(enc(a, b, c)) * n + enc(a2, b2, c2)] =
                  enc((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
  return FiniteGroup::from_mult_table(n, std::move(table), "Heis" + std::to_string(p));
}

}  // namespace

GroupPtr special_linear_2(int p) {
  if (p < 2 || p > 7) throw ParseError("sl2 parameter out of supported range");
  const int npts = p * p - 1;
  auto idx = [p](int x, int y) { return x * p + y - 1; };  // skips (0,0)
  auto apply = [&](int m00, int m01, int m10, int m11) {
    std::vector<int> perm(npts);
    for (int x = 0; x < p; ++x)
      for (int y = 0; y < p; ++y) {
        if (x == 0 && y == 0) continue;
        int nx = (m00 * x + m01 * y) % p;
        int ny = (m10 * x + m11 * y) % p;
        perm[idx(x, y)] = idx(nx, ny);
      }
    return perm;
  };
  // [[1,1],[0,1]] and [[0,-1],[1,0]]
  auto t = apply(1, 1, 0, 1);
  auto s = apply(0, p - 1, 1, 0);
  return group_from_generators(npts, {t, s}, "SL2_" + std::to_string(p));
}

GroupPtr group_from_named_family(const std::string& family, int parameter) {
  if (family == "cyclic") return cyclic_group(parameter);
  if (family == "dihedral") return dihedral_group(parameter);
  if (family == "symmetric") return symmetric_group(parameter);
  if (family == "alternating") return alternating_group(parameter);
  if (family == "quaternion8") return quaternion8();
  if (family == "heisenberg_p" || family == "heisenberg") return heisenberg_group(parameter);
  if (family == "direct_product")
    throw ParseError("direct_product needs two factor specs, not a single parameter");
  throw ParseError("unknown family: " + family);
}

}  // namespace gdft
