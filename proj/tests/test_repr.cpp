#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <set>

#include "gdft/clifford.hpp"
#include "gdft/errors.hpp"
#include "gdft/io.hpp"
#include "gdft/kernels.hpp"

using namespace gdft;

namespace {

const Subgroup& subgroup_of_order(const std::vector<Subgroup>& subs, int order) {
  for (const auto& s : subs)
    if (s.order() == order) return s;
  throw std::runtime_error("no subgroup of that order");
}

std::vector<int> sorted_dims(const IrrepSet& s) {
  std::vector<int> d;
  for (const auto& r : s.irreps) d.push_back(r.dim);
  std::sort(d.begin(), d.end());
  return d;
}

// multiplicity of sigma in the restriction of rho, straight from characters
int multiplicity(const IrrepSet& big, int rho, const SubgroupGroup& h, const IrrepSet& small,
                 int sigma) {
  cplx ip = 0;
  for (int e = 0; e < h.group->order(); ++e)
    ip += big.irreps[rho].character(h.to_parent[e]) *
          std::conj(small.irreps[sigma].character(e));
  ip /= double(h.group->order());
  return int(std::lround(ip.real()));
}

}  // namespace

TEST_CASE("cyclic characters") {
  auto c4 = group_from_named_family("cyclic", 4);
  auto irr = compute_irreps(c4);
  REQUIRE(irr.count() == 4);
  std::multiset<std::pair<long, long>> values;
  for (const auto& r : irr.irreps) {
    CHECK(r.dim == 1);
    auto v = r.character(1);
    values.insert({std::lround(v.real() * 1e6), std::lround(v.imag() * 1e6)});
  }
  // the four fourth roots of unity
  CHECK(values.count({1000000, 0}) == 1);
  CHECK(values.count({0, 1000000}) == 1);
  CHECK(values.count({-1000000, 0}) == 1);
  CHECK(values.count({0, -1000000}) == 1);
}

TEST_CASE("irrep dimension profiles") {
  CHECK(sorted_dims(compute_irreps(group_from_named_family("symmetric", 3))) ==
        std::vector<int>{1, 1, 2});
  CHECK(sorted_dims(compute_irreps(group_from_named_family("quaternion8", 0))) ==
        std::vector<int>{1, 1, 1, 1, 2});
  CHECK(sorted_dims(compute_irreps(group_from_named_family("alternating", 5))) ==
        std::vector<int>{1, 3, 3, 4, 5});
  CHECK(sorted_dims(compute_irreps(group_from_named_family("symmetric", 5))) ==
        std::vector<int>{1, 1, 4, 4, 5, 5, 6});
  CHECK(sorted_dims(compute_irreps(group_from_named_family("heisenberg_p", 3))) ==
        std::vector<int>{1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3});
}

TEST_CASE("irrep sets satisfy completeness and the dimension inequality") {
  for (const char* spec :
       {"cyclic:12", "dihedral:4", "dihedral:9", "symmetric:4", "alternating:4", "quaternion8",
        "heisenberg:3", "c3xs3"}) {
    auto g = group_from_cli(spec);
    auto irr = compute_irreps(g);
    long long sum_sq = 0;
    for (const auto& r : irr.irreps) sum_sq += 1LL * r.dim * r.dim;
    CHECK(sum_sq == g->order());
    for (double alpha : {2.0, 3.0}) {
      double total = 0;
      for (const auto& r : irr.irreps) total += std::pow(double(r.dim), alpha);
      CHECK(total <= std::pow(double(g->order()), alpha / 2.0) + 1e-9);
    }
    validate_irrep_set(irr);  // homomorphism, unitarity, irreducibility
  }
}

TEST_CASE("restriction to the whole group is the identity plan") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto whole = subgroup_as_group(full_subgroup(s3));
  auto plan = restriction_plan(irr, whole, irr);
  for (int r = 0; r < irr.count(); ++r) {
    CHECK(plan.per_big[r].identity);
    REQUIRE(plan.per_big[r].layout.size() == 1);
    CHECK(plan.per_big[r].layout[0].small_id == r);
  }
}

TEST_CASE("restriction of S3 irreps to C3 and C2") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto subs = all_subgroups(s3);

  auto c3 = subgroup_as_group(subgroup_of_order(subs, 3));
  auto irr_c3 = compute_irreps(c3.group);
  auto plan3 = restriction_plan(irr, c3, irr_c3);
  CHECK(restriction_residual(irr, c3, irr_c3, plan3) < 1e-8);
  for (int r = 0; r < irr.count(); ++r) {
    if (irr.irreps[r].dim != 2) continue;
    // the 2-dim irrep restricts to the two nontrivial characters
    std::set<int> ids;
    for (const auto& slot : plan3.per_big[r].layout) ids.insert(slot.small_id);
    CHECK(ids.size() == 2);
    for (int sigma : ids) {
      CHECK(std::abs(irr_c3.irreps[sigma].character(1) - cplx(1.0)) > 0.5);  // not trivial
      CHECK(multiplicity(irr, r, c3, irr_c3, sigma) == 1);
    }
  }

  auto c2 = subgroup_as_group(subgroup_of_order(subs, 2));
  auto irr_c2 = compute_irreps(c2.group);
  auto plan2 = restriction_plan(irr, c2, irr_c2);
  for (int r = 0; r < irr.count(); ++r) {
    if (irr.irreps[r].dim != 2) continue;
    // trivial + sign, one copy each
    std::set<int> ids;
    for (const auto& slot : plan2.per_big[r].layout) ids.insert(slot.small_id);
    CHECK(ids.size() == 2);
  }
}

TEST_CASE("restriction plans reproduce the subgroup blocks entrywise") {
  struct Pair {
    const char* big;
    int sub_order;
  };
  for (auto [big_spec, sub_order] : {Pair{"symmetric:4", 12}, Pair{"dihedral:6", 6},
                                     Pair{"quaternion8", 4}, Pair{"alternating:5", 12}}) {
    auto g = group_from_cli(big_spec);
    auto irr = compute_irreps(g);
    auto sub = subgroup_as_group(subgroup_of_order(all_subgroups(g), sub_order));
    auto irr_sub = compute_irreps(sub.group);
    auto plan = restriction_plan(irr, sub, irr_sub);
    CHECK(restriction_residual(irr, sub, irr_sub, plan) < 1e-8);
    for (int r = 0; r < irr.count(); ++r) {
      int covered = 0;
      for (const auto& slot : plan.per_big[r].layout)
        covered += irr_sub.irreps[slot.small_id].dim;
      CHECK(covered == irr.irreps[r].dim);
    }
  }
}

TEST_CASE("clifford data for S3 over C3") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto c3 = subgroup_as_group(subgroup_of_order(all_subgroups(s3), 3));
  auto irr_n = compute_irreps(c3.group);
  auto adapted = clifford_adapt(irr, c3, irr_n);
  const auto& cd = adapted.cd;

  REQUIRE(cd.orbits.size() == 2);
  // one singleton orbit (the trivial character) and one of size two
  std::multiset<std::size_t> sizes{cd.orbits[0].size(), cd.orbits[1].size()};
  CHECK(sizes == std::multiset<std::size_t>{1, 2});

  int quot = s3->order() / c3.group->order();
  for (std::size_t l = 0; l < cd.families.size(); ++l) {
    long long total = 0;
    for (int s : cd.families[l])
      total += 1LL * irr.irreps[s].dim * cd.sigma[s].e / cd.sigma[s].d;
    CHECK(total == quot);  // the counting identity, exact integers
  }
  for (int s = 0; s < irr.count(); ++s) {
    CHECK(cd.sigma[s].d == 1);
    CHECK(cd.sigma[s].e == 1);
    if (irr.irreps[s].dim == 2)
      CHECK(cd.orbits[cd.sigma[s].orbit].size() == 2);
    else
      CHECK(cd.orbits[cd.sigma[s].orbit].size() == 1);
  }

  // sum over all families of dim^2 equals |H|
  long long total_sq = 0;
  for (const auto& fam : cd.families)
    for (int s : fam) total_sq += 1LL * irr.irreps[s].dim * irr.irreps[s].dim;
  CHECK(total_sq == s3->order());
}

TEST_CASE("clifford data over the trivial subgroup") {
  auto a4 = group_from_named_family("alternating", 4);
  auto irr = compute_irreps(a4);
  auto triv = subgroup_as_group(trivial_subgroup(a4));
  auto irr_n = compute_irreps(triv.group);
  auto adapted = clifford_adapt(irr, triv, irr_n);
  CHECK(adapted.cd.orbits.size() == 1);
  for (int s = 0; s < irr.count(); ++s) {
    CHECK(adapted.cd.sigma[s].e == irr.irreps[s].dim);
    CHECK(adapted.cd.sigma[s].d == 1);
  }
}

TEST_CASE("adapted bases stay unitary homomorphisms") {
  auto s4 = group_from_named_family("symmetric", 4);
  auto irr = compute_irreps(s4);
  auto v4 = subgroup_as_group(subgroup_of_order(normal_subgroups(s4), 4));
  auto irr_n = compute_irreps(v4.group);
  auto adapted = clifford_adapt(irr, v4, irr_n);
  validate_irrep_set(adapted.irr_h);
  // characters unchanged by the basis change
  for (int s = 0; s < irr.count(); ++s)
    for (int e = 0; e < s4->order(); ++e)
      CHECK(std::abs(adapted.irr_h.irreps[s].character(e) - irr.irreps[s].character(e)) < 1e-9);
}

TEST_CASE("irrep equivalence") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  int two = -1, one_a = -1, one_b = -1;
  for (int i = 0; i < irr.count(); ++i) {
    if (irr.irreps[i].dim == 2) two = i;
    else if (one_a < 0) one_a = i;
    else one_b = i;
  }
  auto t_self = irrep_equivalence(irr.irreps[two], irr.irreps[two], s3);
  REQUIRE(t_self.has_value());

  // conjugate by a fixed unitary and recover an intertwiner
  Matrix u(2, 2);
  const double th = 0.73;
  u(0, 0) = std::cos(th);
  u(0, 1) = std::sin(th);
  u(1, 0) = -std::sin(th);
  u(1, 1) = std::cos(th);
  Irrep twisted = irr.irreps[two];
  for (auto& m : twisted.mat) m = matmul(matmul(u, m), adjoint(u));
  auto t = irrep_equivalence(irr.irreps[two], twisted, s3);
  REQUIRE(t.has_value());
  for (int e = 0; e < s3->order(); ++e) {
    Matrix rhs = matmul(matmul(*t, twisted.mat[e]), adjoint(*t));
    CHECK(frob_dist(irr.irreps[two].mat[e], rhs) < 1e-8);
  }

  CHECK_FALSE(irrep_equivalence(irr.irreps[one_a], irr.irreps[one_b], s3).has_value());
}

TEST_CASE("cache round-trips bit-exactly") {
  auto q8 = group_from_named_family("quaternion8", 0);
  auto irr = compute_irreps(q8);
  auto path = std::filesystem::temp_directory_path() / "gdft_cache_test.json";
  save_irrep_cache(irr, path.string());
  auto loaded = load_irrep_cache(q8, path.string());
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->count() == irr.count());
  for (int i = 0; i < irr.count(); ++i) {
    CHECK(loaded->irreps[i].dim == irr.irreps[i].dim);
    for (int e = 0; e < q8->order(); ++e) CHECK(loaded->irreps[i].mat[e] == irr.irreps[i].mat[e]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("generic construction is deterministic per seed") {
  auto a4 = group_from_named_family("alternating", 4);
  auto one = compute_irreps(a4, 5);
  auto two = compute_irreps(a4, 5);
  REQUIRE(one.count() == two.count());
  for (int i = 0; i < one.count(); ++i)
    for (int e = 0; e < a4->order(); ++e) CHECK(one.irreps[i].mat[e] == two.irreps[i].mat[e]);
}
