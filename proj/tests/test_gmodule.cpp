#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "regorb/gmodule.hpp"

using namespace regorb;

namespace {

// Commuting transvections sharing a center: a1 adds v1 to v2, a2 adds v1 to v3.
GModule shear_module(i64 p, FiniteGroup& storage) {
  Matrix a1 = Matrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}, p);
  Matrix a2 = Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {1, 0, 1}}, p);
  storage = close_generators({GenImage::of(a1), GenImage::of(a2)});
  return module_from_generators(storage, {a1, a2}, p);
}

// C3 acting irreducibly on F_2^2 by the companion matrix of x^2+x+1.
GModule c3_on_f4(FiniteGroup& storage) {
  Matrix m = Matrix::from_rows({{0, 1}, {1, 1}}, 2);
  storage = close_generators({GenImage::of(m)});
  return module_from_generators(storage, {m}, 2);
}

}  // namespace

TEST_CASE("module construction and kernels") {
  FiniteGroup c3 = close_generators({GenImage::of(Perm{{1, 2, 0}})});
  GModule triv = trivial_module(c3, 2, 2);
  CHECK(triv.kernel.size() == 3);

  FiniteGroup a;
  GModule shear = shear_module(3, a);
  CHECK(a.n == 9);
  CHECK(shear.kernel.size() == 1);  // faithful
  CHECK(shear.dim == 3);

  FiniteGroup c;
  GModule m = c3_on_f4(c);
  CHECK(m.kernel.size() == 1);

  // relation violation: C3's generator mapped to an order-2 matrix
  Matrix inv2 = Matrix::from_rows({{0, 1}, {1, 0}}, 3);
  CHECK_THROWS_AS(module_from_generators(c3, {inv2}, 3), DomainError);
}

TEST_CASE("orbit and stabilizer") {
  FiniteGroup a;
  GModule shear = shear_module(3, a);

  auto zero = orbit_and_stabilizer(shear, {0, 0, 0});
  CHECK(zero.size == 1);
  CHECK(zero.stabilizer.order() == 9);

  auto v2 = orbit_and_stabilizer(shear, {0, 1, 0});
  CHECK(v2.size == 3);
  CHECK(v2.stabilizer.order() == 3);
  std::vector<Vec> expected{{0, 1, 0}, {1, 1, 0}, {2, 1, 0}};
  std::sort(expected.begin(), expected.end());
  CHECK(v2.orbit == expected);
  for (int g : v2.stabilizer.elems) {
    Vec img = vec_mat({0, 1, 0}, shear.rho[g]);
    CHECK(img == Vec{0, 1, 0});
  }

  FiniteGroup c;
  GModule m = c3_on_f4(c);
  auto e0 = orbit_and_stabilizer(m, {1, 0});
  CHECK(e0.size == 3);
  CHECK(e0.stabilizer.order() == 1);
  CHECK(e0.regular_orbit);
  CHECK_FALSE(e0.regular_module);  // 3 vectors in dimension 2 cannot be independent
}

TEST_CASE("orbit sizes partition the vector space") {
  std::mt19937_64 rng(555);
  FiniteGroup a;
  GModule shear = shear_module(3, a);
  auto scan = regular_orbit_scan(shear);
  i64 covered = 0;
  for (auto& [size, count] : scan.histogram) covered += size * count;
  CHECK(covered == 27);
  // orbit-stabilizer identity on sampled vectors
  for (int t = 0; t < 10; ++t) {
    Vec v = decode_vector(static_cast<i64>(rng() % 27), 3, 3);
    auto rep = orbit_and_stabilizer(shear, v);
    CHECK(rep.size * rep.stabilizer.order() == 9);
  }
}

TEST_CASE("shear module has no regular orbit and orbit sizes divide p") {
  for (i64 p : {2, 3, 5}) {
    FiniteGroup a;
    GModule shear = shear_module(p, a);
    auto scan = regular_orbit_scan(shear);
    CHECK_FALSE(scan.regular_orbit_witness.has_value());
    for (auto& [size, count] : scan.histogram) CHECK(p % size == 0);
    // fixed vectors are exactly the multiples of v1
    CHECK(scan.histogram[1] == p);
  }
}

TEST_CASE("regular orbit without regular module") {
  FiniteGroup c;
  GModule m = c3_on_f4(c);
  auto scan = regular_orbit_scan(m);
  REQUIRE(scan.regular_orbit_witness.has_value());
  CHECK_FALSE(scan.regular_module_witness.has_value());
  CHECK(scan.histogram[3] == 1);
  CHECK(scan.histogram[1] == 1);  // zero vector only
}

TEST_CASE("trivial group: every vector is a regular orbit") {
  FiniteGroup t = trivial_group();
  GModule m = trivial_module(t, 1, 2);
  auto scan = regular_orbit_scan(m);
  CHECK(scan.orbit_count == 2);
  REQUIRE(scan.regular_module_witness.has_value());
  CHECK(*scan.regular_module_witness == Vec{1});
}

TEST_CASE("scan agreement: witness exists iff histogram hits |A/ker|") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 8; ++trial) {
    auto rnd = [&]() {
      while (true) {
        Matrix m(3, 3, 2);
        for (auto& x : m.a) x = static_cast<i64>(rng() % 2);
        if (mat_is_invertible(m)) return m;
      }
    };
    Matrix g1 = rnd(), g2 = rnd();
    FiniteGroup g;
    try {
      g = close_generators({GenImage::of(g1), GenImage::of(g2)}, 400);
    } catch (const CapError&) {
      continue;
    }
    GModule m = module_from_generators(g, {g1, g2}, 2);
    auto scan = regular_orbit_scan(m);
    i64 target = g.n / static_cast<i64>(m.kernel.size());
    bool hit = scan.histogram.count(target) > 0;
    CHECK(hit == scan.regular_orbit_witness.has_value());
  }
}

TEST_CASE("dual module") {
  FiniteGroup t = trivial_group();
  GModule m = trivial_module(t, 2, 3);
  GModule d = dual_module(m);
  CHECK(d.rho[0] == m.rho[0]);

  FiniteGroup c;
  GModule f4 = c3_on_f4(c);
  GModule dd = dual_module(dual_module(f4));
  for (int g = 0; g < c.n; ++g) CHECK(dd.rho[g] == f4.rho[g]);

  auto s1 = regular_orbit_scan(f4);
  auto s2 = regular_orbit_scan(dual_module(f4));
  CHECK(s1.histogram == s2.histogram);
}

TEST_CASE("homogeneous components: eigenspace split over F_3") {
  Matrix diag = Matrix::from_rows({{1, 0}, {0, 2}}, 3);
  FiniteGroup c2 = close_generators({GenImage::of(diag)});
  GModule m = module_from_generators(c2, {diag}, 3);
  auto dec = homogeneous_components(m, whole_group(c2));
  REQUIRE(dec.comps.size() == 2);
  for (auto& c : dec.comps) {
    CHECK(c.basis.rows == 1);
    CHECK(c.multiplicity == 1);
    CHECK(c.endo_degree == 1);
  }
}

TEST_CASE("homogeneous components: two copies of one isotype merge") {
  Matrix m2 = Matrix::from_rows({{0, 1}, {1, 1}}, 2);
  Matrix block = kronecker(Matrix::identity(2, 2), m2);  // diag(m2, m2)
  FiniteGroup c3 = close_generators({GenImage::of(block)});
  GModule m = module_from_generators(c3, {block}, 2);
  auto dec = homogeneous_components(m, whole_group(c3));
  REQUIRE(dec.comps.size() == 1);
  CHECK(dec.comps[0].basis.rows == 4);
  CHECK(dec.comps[0].multiplicity == 2);
  CHECK(dec.comps[0].endo_degree == 2);
  CHECK(dec.comps[0].isotype_basis.rows == 2);
}

TEST_CASE("homogeneous components: trivial C") {
  FiniteGroup c;
  GModule m = c3_on_f4(c);
  auto dec = homogeneous_components(m, trivial_subgroup(c));
  REQUIRE(dec.comps.size() == 1);
  CHECK(dec.comps[0].basis.rows == 2);
  CHECK(dec.comps[0].isotype_basis.rows == 1);
  CHECK(dec.comps[0].multiplicity == 2);
}

TEST_CASE("semisimplicity precondition") {
  Matrix j2 = Matrix::from_rows({{1, 1}, {0, 1}}, 2);
  FiniteGroup c2 = close_generators({GenImage::of(j2)});
  GModule bad = module_from_generators(c2, {j2}, 2);
  CHECK_THROWS_AS(homogeneous_components(bad, whole_group(c2)), HypothesisError);
}

TEST_CASE("component projections commute with the C-action") {
  // C2 x C3 acting on F_5^3 = (sign line) + (order-3 rotation plane)
  Matrix s = Matrix::from_rows({{4, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 5);
  Matrix rot = Matrix::from_rows({{1, 0, 0}, {0, 0, 1}, {0, 4, 4}}, 5);
  FiniteGroup g = close_generators({GenImage::of(s), GenImage::of(rot)});
  GModule m = module_from_generators(g, {s, rot}, 5);
  auto dec = homogeneous_components(m, whole_group(g));
  REQUIRE(dec.comps.size() >= 2);
  std::vector<Vec> rows;
  for (auto& c : dec.comps)
    for (int i = 0; i < c.basis.rows; ++i) rows.push_back(c.basis.row(i));
  Matrix change = Matrix::from_rows(rows, 5);
  Matrix change_inv = mat_inverse(change);
  int offset = 0;
  for (auto& c : dec.comps) {
    Matrix d(3, 3, 5);
    for (int i = 0; i < c.basis.rows; ++i) d.at(offset + i, offset + i) = 1;
    Matrix proj = mat_mul(mat_mul(change_inv, d), change);
    for (int gi : g.gens) CHECK(mat_mul(proj, m.rho[gi]) == mat_mul(m.rho[gi], proj));
    offset += c.basis.rows;
  }
}

TEST_CASE("hom space: multiplicity one, trivial B") {
  FiniteGroup c;
  GModule m = c3_on_f4(c);
  SubgroupGroup sub = subgroup_as_group(c, whole_group(c));
  auto dec = homogeneous_components(m, whole_group(c));
  REQUIRE(dec.comps.size() == 1);
  UData u = hom_space_module(m, sub, dec.comps[0].isotype_basis, dec.comps[0].basis, /*alpha=*/0);
  CHECK(u.m == 1);
  CHECK(u.e == 2);  // End of the F_4-line is F_4
  CHECK(u.partition == std::vector<int>{1});
  CHECK(u.alpha_order == 1);
}

TEST_CASE("hom space between non-isomorphic irreducibles is zero") {
  // C7 on F_2^6 as two non-isomorphic 3-dimensional summands
  Matrix c1 = Matrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}, 2);  // x^3+x+1
  Matrix c2 = Matrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 1}}, 2);  // x^3+x^2+1
  Matrix both(6, 6, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      both.at(i, j) = c1.at(i, j);
      both.at(3 + i, 3 + j) = c2.at(i, j);
    }
  FiniteGroup c7 = close_generators({GenImage::of(both)});
  REQUIRE(c7.n == 7);
  GModule m = module_from_generators(c7, {both}, 2);
  SubgroupGroup sub = subgroup_as_group(c7, whole_group(c7));
  Matrix x1(3, 6, 2), x2(3, 6, 2);
  for (int i = 0; i < 3; ++i) {
    x1.at(i, i) = 1;
    x2.at(i, 3 + i) = 1;
  }
  CHECK(intertwiner_space(m, sub, x1, x2).empty());
  CHECK(intertwiner_space(m, sub, x1, x1).size() == 3);  // End = F_8
  CHECK_THROWS_AS(hom_space_module(m, sub, x1, x2, 0), DomainError);
}

TEST_CASE("hom space for X tensor R2 with alpha = J2") {
  Matrix m2 = Matrix::from_rows({{0, 1}, {1, 1}}, 2);
  Matrix j2 = Matrix::from_rows({{1, 1}, {0, 1}}, 2);
  Matrix cgen = kronecker(m2, Matrix::identity(2, 2));
  Matrix bgen = kronecker(Matrix::identity(2, 2), j2);
  FiniteGroup a = close_generators({GenImage::of(bgen), GenImage::of(cgen)});
  REQUIRE(a.n == 6);
  GModule m = module_from_generators(a, {bgen, cgen}, 2);
  Subgroup csub = subgroup_closure(a, {a.gens[1]});
  Subgroup bsub = subgroup_closure(a, {a.gens[0]});
  REQUIRE(csub.order() == 3);
  REQUIRE(bsub.order() == 2);
  auto dec = homogeneous_components(m, csub);
  REQUIRE(dec.comps.size() == 1);
  SubgroupGroup csub_g = subgroup_as_group(a, csub);
  UData u = hom_space_module(m, csub_g, dec.comps[0].isotype_basis, dec.comps[0].basis, a.gens[0]);
  CHECK(u.m == 2);
  CHECK(u.e == 2);
  CHECK(u.partition == std::vector<int>{2});
  CHECK(u.alpha_order == 2);
  CHECK(u.n_exp == 1);

  // tensor assembly: evaluation is 4x4 invertible and intertwines everything
  SubgroupGroup bc = subgroup_as_group(a, whole_group(a));
  auto asm4 = tensor_assemble(m, bc, dec.comps[0].isotype_basis, dec.comps[0].basis, u, a.gens[0],
                              {a.gens[1]});
  CHECK(asm4.evaluation.rows == 4);
  CHECK(mat_rank(asm4.evaluation) == 4);
}

TEST_CASE("tensor assembly in the multiplicity-one case") {
  FiniteGroup c;
  GModule m = c3_on_f4(c);
  SubgroupGroup sub = subgroup_as_group(c, whole_group(c));
  auto dec = homogeneous_components(m, whole_group(c));
  UData u = hom_space_module(m, sub, dec.comps[0].isotype_basis, dec.comps[0].basis, 0);
  auto asm1 = tensor_assemble(m, sub, dec.comps[0].isotype_basis, dec.comps[0].basis, u, 0,
                              {c.gens[0]});
  CHECK(asm1.evaluation.rows == 2);
  CHECK(mat_rank(asm1.evaluation) == 2);
}

TEST_CASE("section action: C3 on C7 mod Phi") {
  FiniteGroup c7 = close_generators({GenImage::of(Perm{{1, 2, 3, 4, 5, 6, 0}})});
  std::vector<int> square(7);
  for (int x = 0; x < 7; ++x) square[x] = c7.mul(x, x);
  FiniteGroup c3 = close_generators({GenImage::of(Perm{{1, 2, 0}})});
  auto frob = product_group(c7, c3, {square});
  Subgroup r = subgroup_closure(frob.group, {frob.embed_n[1]});
  Subgroup a = subgroup_closure(frob.group, {frob.embed_h[1]});
  Subgroup phi = trivial_subgroup(frob.group);
  auto sec = section_action(frob.group, r, phi, a, 7);
  CHECK(sec.mod.dim == 1);
  REQUIRE(sec.acting.group.n == 3);
  // the generator acts by the scalar 2 (or 4, its square) on F_7
  i64 scalar = sec.mod.rho[sec.acting.group.gens[0]].at(0, 0);
  CHECK((scalar == 2 || scalar == 4));
  CHECK(fp_pow(scalar, 3, 7) == 1);
  // orbit {1, 2, 4} has trivial stabilizer: a regular orbit
  auto scan = regular_orbit_scan(sec.mod);
  CHECK(scan.regular_orbit_witness.has_value());
}

TEST_CASE("section action: trivial acting group") {
  FiniteGroup c7 = close_generators({GenImage::of(Perm{{1, 2, 3, 4, 5, 6, 0}})});
  auto sec = section_action(c7, whole_group(c7), trivial_subgroup(c7), trivial_subgroup(c7), 7);
  CHECK(sec.mod.dim == 1);
  CHECK(sec.mod.kernel.size() == 1);
}

TEST_CASE("section action: Q8 mod Frattini") {
  Matrix i = Matrix::from_rows({{0, 2}, {1, 0}}, 3);
  Matrix j = Matrix::from_rows({{1, 1}, {1, 2}}, 3);
  FiniteGroup q8 = close_generators({GenImage::of(i), GenImage::of(j)});
  Subgroup phi = frattini_subgroup(q8);
  REQUIRE(phi.order() == 2);
  auto sec = section_action(q8, whole_group(q8), phi, trivial_subgroup(q8), 2);
  CHECK(sec.mod.dim == 2);
  CHECK(sec.mod.p == 2);
}

TEST_CASE("section action rejects non-elementary sections") {
  FiniteGroup c4 = close_generators({GenImage::of(Perm{{1, 2, 3, 0}})});
  CHECK_THROWS_AS(
      section_action(c4, whole_group(c4), trivial_subgroup(c4), trivial_subgroup(c4), 2),
      HypothesisError);
}
