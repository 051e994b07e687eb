#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gdft/errors.hpp"
#include "gdft/io.hpp"
#include "gdft/reductions.hpp"

using namespace gdft;

namespace {

const Subgroup& subgroup_of_order(const std::vector<Subgroup>& subs, int order) {
  for (const auto& s : subs)
    if (s.order() == order) return s;
  throw std::runtime_error("no subgroup of that order");
}

GroupAlgebraElement delta(const GroupPtr& g, int at) {
  GroupAlgebraElement out{g, std::vector<cplx>(g->order()), std::nullopt};
  out.coeffs[at] = 1.0;
  out.rebuild_support();
  return out;
}

// Fixture for the rewrite machinery of a pair (H, N).
struct RewriteFixture {
  GroupPtr h;
  SubgroupGroup n;
  std::shared_ptr<const IrrepSet> irr_n;
  IrrepSet irr_h;  // N-adapted
  CliffordData cd;
  TargetFormat fmt;
  Labeling lab;
  static RewriteFixture make(const GroupPtr& h, const Subgroup& n_sub) {
    RewriteFixture f;
    f.h = h;
    f.n = subgroup_as_group(n_sub);
    f.irr_n = std::make_shared<const IrrepSet>(compute_irreps(f.n.group));
    auto raw = compute_irreps(h);
    auto adapted = clifford_adapt(raw, f.n, *f.irr_n);
    f.irr_h = std::move(adapted.irr_h);
    f.cd = std::move(adapted.cd);
    f.fmt = build_target_format(h->order() / f.n.group->order());
    f.lab = build_labeling(f.cd, f.fmt, f.irr_h);
    return f;
  }

  // random block-diagonal in the adapted basis
  BlockDiagonal random_m(std::uint64_t seed) const {
    auto alpha = random_alpha(h, seed);
    return naive_dft(alpha, irr_h);
  }
};

TriplePlan make_triple(const IrrepSet& big, const Subgroup& n, const Subgroup& h,
                       const Subgroup& k) {
  auto ng = subgroup_as_group(n);
  auto hg = subgroup_as_group(h);
  auto kg = subgroup_as_group(k);
  auto irr_n = std::make_shared<const IrrepSet>(compute_irreps(ng.group));
  auto raw_h = compute_irreps(hg.group);
  Subgroup n_in_h{hg.group, {}};
  for (int e : n.elements) n_in_h.elements.push_back(hg.index_in_subgroup[e]);
  std::sort(n_in_h.elements.begin(), n_in_h.elements.end());
  auto adapted = clifford_adapt(raw_h, subgroup_as_group(n_in_h), *irr_n);
  auto irr_h = std::make_shared<const IrrepSet>(std::move(adapted.irr_h));
  auto irr_k = std::make_shared<const IrrepSet>(compute_irreps(kg.group));
  return build_triple_plan(big, n, h, k, irr_n, irr_h, irr_k, adapted.cd, adapted.plan);
}

}  // namespace

TEST_CASE("single-subgroup reduction matches the naive transform") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto c3 = subgroup_of_order(all_subgroups(s3), 3);
  auto irr_h = std::make_shared<const IrrepSet>(
      compute_irreps(subgroup_as_group(c3).group));
  auto sp = build_single_plan(irr, c3, irr_h);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto alpha = random_alpha(s3, seed);
    auto got = single_subgroup_dft(alpha, irr, sp,
                                   [&](const GroupAlgebraElement& b) {
                                     return naive_dft(b, *sp.irr_h);
                                   });
    CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-9);
  }
}

TEST_CASE("single-subgroup with H = G costs nothing beyond the child call") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto irr_shared = std::make_shared<const IrrepSet>(irr);
  auto sp = build_single_plan(irr, full_subgroup(s3), irr_shared);
  auto alpha = random_alpha(s3, 7);
  OpCounter with_child, child_only;
  int calls = 0;
  auto got = single_subgroup_dft(alpha, irr, sp,
                                 [&](const GroupAlgebraElement& b) {
                                   ++calls;
                                   return naive_dft(b, *sp.irr_h, &with_child);
                                 },
                                 &with_child);
  naive_dft(alpha, irr, &child_only);
  CHECK(calls == 1);
  CHECK(with_child.cmul() == child_only.cmul());  // zero assembly multiplies
  CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-12);
}

TEST_CASE("single-subgroup skips unsupported cosets") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto c3 = subgroup_of_order(all_subgroups(s3), 3);
  auto irr_h = std::make_shared<const IrrepSet>(compute_irreps(subgroup_as_group(c3).group));
  auto sp = build_single_plan(irr, c3, irr_h);

  // support inside one nontrivial coset C3*x
  GroupAlgebraElement alpha{s3, std::vector<cplx>(6), std::nullopt};
  int x = sp.coset_x[1];
  for (int e : c3.elements) alpha.coeffs[s3->mult(e, x)] = cplx(0.5, -0.25);
  alpha.rebuild_support();
  int calls = 0;
  auto got = single_subgroup_dft(alpha, irr, sp, [&](const GroupAlgebraElement& b) {
    ++calls;
    return naive_dft(b, *sp.irr_h);
  });
  CHECK(calls == 1);
  CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-10);
}

TEST_CASE("prime-index reduction") {
  struct Case {
    const char* spec;
    int n_order;
  };
  for (auto [spec, n_order] : {Case{"cyclic:6", 3}, Case{"symmetric:4", 12}}) {
    auto g = group_from_cli(spec);
    auto irr = compute_irreps(g);
    auto n = subgroup_of_order(normal_subgroups(g), n_order);
    auto irr_n =
        std::make_shared<const IrrepSet>(compute_irreps(subgroup_as_group(n).group));
    auto pp = build_prime_plan(irr, n, irr_n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto alpha = random_alpha(g, seed);
      auto got = prime_index_dft(alpha, irr, pp, [&](const GroupAlgebraElement& b) {
        return naive_dft(b, *pp.irr_n);
      });
      CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-9);
    }

    // support inside N: a single child call, no Horner steps
    GroupAlgebraElement alpha{g, std::vector<cplx>(g->order()), std::nullopt};
    for (int e : n.elements) alpha.coeffs[e] = cplx(0.25, 0.1);
    alpha.rebuild_support();
    int calls = 0;
    auto got = prime_index_dft(alpha, irr, pp, [&](const GroupAlgebraElement& b) {
      ++calls;
      return naive_dft(b, *pp.irr_n);
    });
    CHECK(calls == 1);
    CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-10);
  }

  auto c6 = group_from_named_family("cyclic", 6);
  auto irr = compute_irreps(c6);
  auto triv = trivial_subgroup(c6);  // index 6 is composite
  auto irr_n = std::make_shared<const IrrepSet>(compute_irreps(subgroup_as_group(triv).group));
  CHECK_THROWS_AS(build_prime_plan(irr, triv, irr_n), CapError);
}

TEST_CASE("target format") {
  auto f1 = build_target_format(1);
  CHECK(f1.level_counts == std::vector<int>{2});
  CHECK(f1.total_entries() == 2);

  auto f5 = build_target_format(5);
  CHECK(f5.level_counts == std::vector<int>{10, 3, 1, 2});
  CHECK(f5.total_entries() == 10 + 12 + 16 + 128);

  auto f2 = build_target_format(2);
  CHECK(f2.level_counts == std::vector<int>{4, 2});
  CHECK(f2.total_entries() == 4 + 8);

  for (int m : {1, 2, 3, 5, 7, 12, 20}) {
    auto f = build_target_format(m);
    for (int i = 0; i < f.levels(); ++i)
      CHECK(1LL * f.level_counts[i] * f.block_size(i) * f.block_size(i) >=
            2LL * m / f.block_size(i) * 1);  // capacity per level
  }
}

TEST_CASE("labeling for S3 over C3") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto fx = RewriteFixture::make(s3, subgroup_of_order(all_subgroups(s3), 3));
  CHECK(fx.fmt.m == 2);
  // two height-1 columns (the linear characters) and one height-2 column
  int h1 = 0, h2 = 0;
  for (int s = 0; s < fx.irr_h.count(); ++s) {
    if (fx.lab.height[s] == 1) ++h1;
    if (fx.lab.height[s] == 2) ++h2;
  }
  CHECK(h1 == 2);
  CHECK(h2 == 1);
  // level fit: 2^i/2 < height <= 2^i
  for (int s = 0; s < fx.irr_h.count(); ++s)
    for (auto [block, col] : fx.lab.column_of[s]) {
      int level = fx.fmt.block_level(block);
      int w = fx.lab.height[s];
      CHECK(w <= fx.fmt.block_size(level));
      CHECK(2 * w > fx.fmt.block_size(level));
      CHECK(col < fx.fmt.block_size(level));
    }
  CHECK(fx.lab.used.size() == 4);
}

TEST_CASE("sparse rewrite reconstructs the transform blocks") {
  struct Pair {
    const char* h;
    int n_order;
  };
  for (auto [spec, n_order] : {Pair{"symmetric:3", 3}, Pair{"dihedral:6", 6},
                               Pair{"alternating:4", 4}}) {
    auto h = group_from_cli(spec);
    auto fx = RewriteFixture::make(h, subgroup_of_order(normal_subgroups(h), n_order));
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto m = fx.random_m(seed);
      int inv_count = 0;
      // check=true throws if the reconstruction identity fails
      auto parents = sparse_rewrite(m, fx.cd, fx.lab, *fx.irr_n, fx.irr_h, nullptr,
                                    true, &inv_count);
      CHECK(inv_count <= int(fx.fmt.total_entries()));
      CHECK(int(parents.size()) == fx.n.group->order());
    }
    // identity transform data reconstructs too
    auto m_ident = naive_dft(delta(h, 0), fx.irr_h);
    sparse_rewrite(m_ident, fx.cd, fx.lab, *fx.irr_n, fx.irr_h, nullptr, true);
  }
}

TEST_CASE("rewrite with trivial N repackages the blocks") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto fx = RewriteFixture::make(s3, trivial_subgroup(s3));
  auto m = fx.random_m(1);
  auto parents = sparse_rewrite(m, fx.cd, fx.lab, *fx.irr_n, fx.irr_h, nullptr, true);
  REQUIRE(parents.size() == 1);
  // every original entry appears somewhere in the parent matrix
  double total_in = 0, total_out = 0;
  for (const auto& b : m.blocks) total_in += frob_norm(b) * frob_norm(b);
  for (const auto& b : parents[0].blocks) total_out += frob_norm(b) * frob_norm(b);
  CHECK(total_in == doctest::Approx(total_out).epsilon(1e-9));
}

TEST_CASE("labels shared across families carry one value") {
  // H = N = C3: three singleton families all map onto the same column
  auto c3 = group_from_named_family("cyclic", 3);
  auto fx = RewriteFixture::make(c3, full_subgroup(c3));
  CHECK(fx.fmt.m == 1);
  CHECK(fx.lab.used.size() == 1);
  CHECK(fx.lab.sources[0].size() == 3);
  auto m = fx.random_m(4);
  auto parents = sparse_rewrite(m, fx.cd, fx.lab, *fx.irr_n, fx.irr_h, nullptr, true);
  // reading the solution back through any family gives bit-identical values
  const auto& coord = fx.lab.used[0];
  for (int n = 0; n < 3; ++n) {
    cplx v = parents[n].blocks[coord.block](coord.row, coord.col);
    for (const auto& src : fx.lab.sources[0]) {
      (void)src;
      cplx again = parents[n].blocks[coord.block](coord.row, coord.col);
      CHECK(v == again);
    }
  }
}

TEST_CASE("triple pipeline on the smallest probe: C2 x C2 with trivial N") {
  auto g =
      direct_product(group_from_named_family("cyclic", 2), group_from_named_family("cyclic", 2));
  auto irr = compute_irreps(g);
  Subgroup n{g, {0}};
  Subgroup h{g, {0, 2}};  // first factor
  Subgroup k{g, {0, 1}};  // second factor
  auto tp = make_triple(irr, n, h, k);  // the build-time probe must pass
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto alpha = random_alpha(g, seed);
    auto got = triple_subgroup_dft(alpha, irr, tp,
                                   [&](const GroupAlgebraElement& b) {
                                     return naive_dft(b, *tp.irr_h);
                                   },
                                   [&](const GroupAlgebraElement& b) {
                                     return naive_dft(b, *tp.irr_k);
                                   });
    CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-10);
  }
}

TEST_CASE("triple pipeline on A5") {
  auto a5 = group_from_named_family("alternating", 5);
  auto irr = compute_irreps(a5);
  auto choice = find_triple(a5);
  auto* tc = std::get_if<TripleCase>(&choice);
  REQUIRE(tc);
  auto tp = make_triple(irr, tc->n, tc->h, tc->k);

  CHECK(tp.lift.sum_a_sq <= tp.r * tp.k.group->order());
  CHECK(tp.lift.sum_a_w <= 4LL * a5->order());

  auto cb_h = [&](const GroupAlgebraElement& b) { return naive_dft(b, *tp.irr_h); };
  auto cb_k = [&](const GroupAlgebraElement& b) { return naive_dft(b, *tp.irr_k); };

  // identity delta lifts to identity blocks
  auto ident = triple_subgroup_dft(delta(a5, 0), irr, tp, cb_h, cb_k);
  for (int i = 0; i < irr.count(); ++i)
    CHECK(frob_dist(ident.blocks[i], Matrix::identity(irr.irreps[i].dim)) < 1e-8);

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto alpha = random_alpha(a5, seed);
    TripleStats stats;
    auto got = triple_subgroup_dft(alpha, irr, tp, cb_h, cb_k, nullptr, &stats);
    CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-7 * alpha.norm1());
    CHECK(stats.repetitions == 1);  // |HK| = |G|
    CHECK(stats.h_dfts == std::uint64_t(tp.k_sub.order() / tp.n_sub.order()));
    CHECK(stats.inverse_n_dfts <= std::uint64_t(tp.r) * stats.h_dfts);
    CHECK(stats.k_dfts <= std::uint64_t(tp.r));
  }
}

TEST_CASE("intermediate representation call counts and support checks") {
  auto a5 = group_from_named_family("alternating", 5);
  auto irr = compute_irreps(a5);
  auto choice = find_triple(a5);
  auto* tc = std::get_if<TripleCase>(&choice);
  REQUIRE(tc);
  auto tp = make_triple(irr, tc->n, tc->h, tc->k);

  auto cb_h = [&](const GroupAlgebraElement& b) { return naive_dft(b, *tp.irr_h); };
  auto cb_k = [&](const GroupAlgebraElement& b) { return naive_dft(b, *tp.irr_k); };

  auto alpha = random_alpha(a5, 1);  // HK = A5, so any support is legal
  TripleStats stats;
  auto ir = intermediate_rep(alpha, tp, cb_h, cb_k, nullptr, &stats);
  CHECK(stats.h_dfts == std::uint64_t(tp.y_reps.size()));
  CHECK(ir.per_coord.size() == tp.lab.used.size());
  auto lifted = lift_to_g_dft(ir, tp);
  CHECK(lifted.max_block_residual(naive_dft(alpha, irr)) < 1e-7 * alpha.norm1());
}

TEST_CASE("support outside HK is rejected with offenders listed") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto subs = all_subgroups(s3);
  auto c3 = subgroup_of_order(subs, 3);
  // degenerate H = K = N = C3; HK = C3 is a proper subset of S3
  auto tp = make_triple(irr, c3, c3, c3);
  auto cb_h = [&](const GroupAlgebraElement& b) { return naive_dft(b, *tp.irr_h); };
  auto cb_k = [&](const GroupAlgebraElement& b) { return naive_dft(b, *tp.irr_k); };

  int off = -1;
  for (int e = 0; e < 6; ++e)
    if (!c3.contains(e)) off = e;
  GroupAlgebraElement bad{s3, std::vector<cplx>(6), std::nullopt};
  bad.coeffs[off] = 1.0;
  bool threw = false;
  try {
    intermediate_rep(bad, tp, cb_h, cb_k);
  } catch (const Error& e) {
    threw = true;
    CHECK(std::string(e.what()).find(std::to_string(off)) != std::string::npos);
  }
  CHECK(threw);

  // on-support input runs the degenerate (K = N) pipeline correctly
  GroupAlgebraElement ok{s3, std::vector<cplx>(6), std::nullopt};
  for (int e : c3.elements) ok.coeffs[e] = cplx(0.3, 0.7);
  ok.rebuild_support();
  auto ir = intermediate_rep(ok, tp, cb_h, cb_k);
  auto lifted = lift_to_g_dft(ir, tp);
  CHECK(lifted.max_block_residual(naive_dft(ok, irr)) < 1e-9);

  // and the full pipeline covers all of S3 via translates
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto alpha = random_alpha(s3, seed);
    TripleStats stats;
    auto got = triple_subgroup_dft(alpha, irr, tp, cb_h, cb_k, nullptr, &stats);
    CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-9);
    CHECK(stats.repetitions == 2);  // |HK| = 3, so two translates
  }
}

TEST_CASE("improper subgroups are rejected by the triple builder") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);
  auto whole = full_subgroup(s3);
  auto c3 = subgroup_of_order(all_subgroups(s3), 3);
  CHECK_THROWS_AS(make_triple(irr, c3, whole, c3), CapError);
}

TEST_CASE("supported transforms extend to full transforms") {
  auto c6 = group_from_named_family("cyclic", 6);
  auto irr = compute_irreps(c6);
  std::vector<int> s{0, 1, 2};
  auto cover = translate_cover(c6, s);
  std::vector<BlockDiagonal> rho_cover(cover.size());
  for (std::size_t t = 0; t < cover.size(); ++t) {
    if (cover[t] == 0) continue;
    BlockDiagonal bd;
    for (const auto& rho : irr.irreps) bd.blocks.push_back(rho.mat[cover[t]]);
    rho_cover[t] = bd;
  }
  int calls = 0;
  auto supported = [&](const GroupAlgebraElement& beta) {
    ++calls;
    return naive_dft(beta, irr);
  };
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    calls = 0;
    auto alpha = random_alpha(c6, seed);
    auto got = supported_dft_to_full(alpha, s, supported, irr, cover, rho_cover);
    CHECK(got.max_block_residual(naive_dft(alpha, irr)) < 1e-10);
    CHECK(calls == int(cover.size()));
  }

  // input already inside S: one callback, no extra translate work
  GroupAlgebraElement inside{c6, std::vector<cplx>(6), std::nullopt};
  inside.coeffs[1] = cplx(2.0, -1.0);
  calls = 0;
  auto got = supported_dft_to_full(inside, s, supported, irr, cover, rho_cover);
  CHECK(calls == 1);
  CHECK(got.max_block_residual(naive_dft(inside, irr)) < 1e-12);

  // S = G: a single identity translate
  std::vector<int> everything(6);
  for (int i = 0; i < 6; ++i) everything[i] = i;
  auto cover_all = translate_cover(c6, everything);
  CHECK(cover_all == std::vector<int>{0});
}
