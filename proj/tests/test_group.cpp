#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "regorb/group.hpp"

using namespace regorb;

namespace {

FiniteGroup s3() {
  return close_generators({GenImage::of(Perm{{1, 0, 2}}), GenImage::of(Perm{{1, 2, 0}})});
}

FiniteGroup q8() {
  Matrix i = Matrix::from_rows({{0, 2}, {1, 0}}, 3);
  Matrix j = Matrix::from_rows({{1, 1}, {1, 2}}, 3);
  return close_generators({GenImage::of(i), GenImage::of(j)});
}

FiniteGroup d8() {
  return close_generators({GenImage::of(Perm{{1, 2, 3, 0}}), GenImage::of(Perm{{3, 2, 1, 0}})});
}

FiniteGroup heisenberg27() {
  Matrix e12 = Matrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}, 3);
  Matrix e23 = Matrix::from_rows({{1, 0, 0}, {0, 1, 1}, {0, 0, 1}}, 3);
  return close_generators({GenImage::of(e12), GenImage::of(e23)});
}

FiniteGroup cyclic(int n) {
  Perm p;
  p.img.resize(n);
  for (int i = 0; i < n; ++i) p.img[i] = (i + 1) % n;
  return close_generators({GenImage::of(p)});
}

std::multiset<i64> class_size_multiset(const FiniteGroup& g) {
  auto c = conjugacy_classes(g);
  return std::multiset<i64>(c.size.begin(), c.size.end());
}

}  // namespace

TEST_CASE("closure of S3 generators") {
  FiniteGroup g = s3();
  CHECK(g.n == 6);
  CHECK(exponent_of(g) == 6);
  // closing the closure gives the same order
  std::vector<GenImage> imgs;
  for (int i : g.gens) imgs.push_back(g.images[i]);
  CHECK(close_generators(imgs).n == 6);
}

TEST_CASE("closure of a unipotent matrix over F_3") {
  Matrix m = Matrix::from_rows({{1, 1}, {0, 1}}, 3);
  CHECK(close_generators({GenImage::of(m)}).n == 3);
}

TEST_CASE("Heisenberg group of order 27") {
  FiniteGroup g = heisenberg27();
  CHECK(g.n == 27);
  CHECK(exponent_of(g) == 3);
  auto inv = group_invariants(g);
  CHECK(inv.center.order() == 3);
  CHECK(inv.derived.order() == 3);
  CHECK(inv.nilpotency_class == 2);
}

TEST_CASE("closure errors") {
  Matrix singular(2, 2, 3);  // zero matrix
  CHECK_THROWS_AS(close_generators({GenImage::of(singular)}), DomainError);
  CHECK_THROWS_AS(close_generators({GenImage::of(Perm{{0, 0, 1}})}), DomainError);
  Perm big;
  big.img.resize(12);
  for (int i = 0; i < 12; ++i) big.img[i] = (i + 1) % 12;
  CHECK_THROWS_AS(close_generators({GenImage::of(big)}, 5), CapError);
}

TEST_CASE("group invariants of S3") {
  FiniteGroup g = s3();
  auto inv = group_invariants(g);
  CHECK(inv.center.order() == 1);
  CHECK(inv.derived.order() == 3);
  CHECK(inv.exponent == 6);
  CHECK_FALSE(inv.nilpotency_class.has_value());
}

TEST_CASE("group invariants of Q8") {
  FiniteGroup g = q8();
  REQUIRE(g.n == 8);
  auto inv = group_invariants(g);
  CHECK(inv.center.order() == 2);
  CHECK(inv.nilpotency_class == 2);
  CHECK(inv.exponent == 4);
  REQUIRE(inv.frattini.has_value());
  CHECK(inv.frattini->elems == inv.center.elems);
}

TEST_CASE("abelian groups have class 1") {
  auto inv = group_invariants(cyclic(6));
  CHECK(inv.nilpotency_class == 1);
  CHECK(inv.derived.order() == 1);
}

TEST_CASE("Frattini agemo formula matches maximal-subgroup oracle") {
  for (auto builder : {q8, d8, heisenberg27}) {
    FiniteGroup g = builder();
    Subgroup agemo = frattini_subgroup(g);
    auto maxes = maximal_subgroups(g);
    Subgroup acc = whole_group(g);
    for (const auto& m : maxes) acc = intersect(acc, m);
    CHECK(agemo.elems == acc.elems);
  }
  // non-prime-power order within the fallback cap
  FiniteGroup c12 = cyclic(12);
  Subgroup f = frattini_subgroup(c12);
  CHECK(f.order() == 2);  // <g^6> for C12
}

TEST_CASE("conjugacy classes") {
  auto cab = conjugacy_classes(cyclic(5));
  CHECK(cab.k == 5);
  for (i64 s : cab.size) CHECK(s == 1);

  CHECK(class_size_multiset(s3()) == std::multiset<i64>{1, 2, 3});
  CHECK(class_size_multiset(q8()) == std::multiset<i64>{1, 1, 2, 2, 2});

  // representatives are least in their class, classes partition the group
  FiniteGroup g = s3();
  auto c = conjugacy_classes(g);
  i64 total = 0;
  for (int i = 0; i < c.k; ++i) {
    total += c.size[i];
    CHECK(c.rep[i] == c.members[i].front());
    CHECK(g.n % c.size[i] == 0);
  }
  CHECK(total == g.n);
}

TEST_CASE("power maps consistent with element orders") {
  FiniteGroup g = q8();
  auto c = conjugacy_classes(g);
  for (int i = 0; i < c.k; ++i) {
    CHECK(c.power_class[i][0] == 0);
    // rep^order is the identity class
    CHECK(c.power_class[i][static_cast<size_t>(c.rep_order[i]) % c.exponent] == 0);
  }
}

TEST_CASE("quotients") {
  FiniteGroup g = heisenberg27();
  // G/G is trivial
  auto qq = quotient_group(g, whole_group(g));
  CHECK(qq.group.n == 1);
  // G/1 has the same invariant fingerprint
  auto q1 = quotient_group(g, trivial_subgroup(g));
  CHECK(q1.group.n == 27);
  CHECK(exponent_of(q1.group) == 3);
  CHECK(class_size_multiset(q1.group) == class_size_multiset(g));
  // Heisenberg-27 / center is elementary abelian of order 9
  auto inv = group_invariants(g);
  auto qz = quotient_group(g, inv.center);
  CHECK(qz.group.n == 9);
  CHECK(exponent_of(qz.group) == 3);
  CHECK(group_invariants(qz.group).derived.order() == 1);
  // projection is a verified homomorphism with kernel N
  Homomorphism h{&g, &qz.group, qz.proj};
  CHECK(verify_homomorphism(h));
  int kernel = 0;
  for (int x = 0; x < g.n; ++x)
    if (qz.proj[x] == 0) ++kernel;
  CHECK(kernel == 3);

  // non-normal subgroup is rejected
  FiniteGroup sym = s3();
  Subgroup refl = subgroup_closure(sym, {sym.gens[0]});
  REQUIRE(refl.order() == 2);
  CHECK_THROWS_AS(quotient_group(sym, refl), HypothesisError);
}

TEST_CASE("direct and semidirect products") {
  FiniteGroup c2 = cyclic(2), c3 = cyclic(3);
  auto prod = product_group(c3, c2, {});
  CHECK(prod.group.n == 6);
  CHECK(exponent_of(prod.group) == 6);  // C2 x C3 = C6

  // C3 x| C2 with inversion: nonabelian of order 6 with trivial center
  std::vector<int> invert(3);
  for (int x = 0; x < 3; ++x) invert[x] = c3.inverse(x);
  auto sd = product_group(c3, c2, {invert});
  CHECK(sd.group.n == 6);
  auto inv = group_invariants(sd.group);
  CHECK(inv.center.order() == 1);
  CHECK(inv.derived.order() == 3);

  // C7 x| C3 with x -> x^2
  FiniteGroup c7 = cyclic(7);
  std::vector<int> square(7);
  for (int x = 0; x < 7; ++x) square[x] = c7.mul(x, x);
  auto frob = product_group(c7, cyclic(3), {square});
  CHECK(frob.group.n == 21);
  auto finv = group_invariants(frob.group);
  CHECK(finv.derived.order() == 7);
  CHECK(finv.center.order() == 1);

  // a non-automorphism action is rejected
  std::vector<int> bad(7, 0);
  CHECK_THROWS_AS(product_group(c7, cyclic(3), {bad}), DomainError);
  // an action violating the relations of H is rejected: C3 cannot act on C7 by inversion
  std::vector<int> inv7(7);
  for (int x = 0; x < 7; ++x) inv7[x] = c7.inverse(x);
  CHECK_THROWS_AS(product_group(c7, cyclic(3), {inv7}), DomainError);
}

TEST_CASE("product embeddings give normal N and complement H") {
  FiniteGroup c7 = cyclic(7);
  std::vector<int> square(7);
  for (int x = 0; x < 7; ++x) square[x] = c7.mul(x, x);
  auto frob = product_group(c7, cyclic(3), {square});
  Subgroup n = subgroup_closure(frob.group, {frob.embed_n[1]});
  CHECK(n.order() == 7);
  CHECK(is_normal(frob.group, n));
  Subgroup h = subgroup_closure(frob.group, {frob.embed_h[1]});
  CHECK(h.order() == 3);
  CHECK(intersect(n, h).order() == 1);
  // conjugation by the complement generator realizes the action
  int g = frob.embed_h[1];
  CHECK(frob.group.conjugate(frob.embed_n[1], g) == frob.embed_n[square[1]]);
}

TEST_CASE("centralizers") {
  FiniteGroup g = s3();
  CHECK(centralizer(g, std::vector<int>{0}).order() == 6);
  Subgroup a3 = derived_subgroup(g);
  Subgroup c = centralizer(g, a3);
  CHECK(c.elems == a3.elems);

  FiniteGroup q = q8();
  Subgroup i_sub = subgroup_closure(q, {q.gens[0]});
  REQUIRE(i_sub.order() == 4);
  Subgroup ci = centralizer(q, i_sub);
  CHECK(ci.elems == i_sub.elems);
}

TEST_CASE("nilpotent Sylow decomposition") {
  FiniteGroup c6 = cyclic(6);
  auto split = nilpotent_sylow_decomposition(c6, 2, 3);
  CHECK(split.p_part.order() == 2);
  CHECK(split.r_part.order() == 3);
  CHECK(split.coprime_part.order() == 1);
  CHECK(split.p_cyclic);
  CHECK(split.r_cyclic);

  FiniteGroup c3 = cyclic(3);
  auto split2 = nilpotent_sylow_decomposition(c3, 2, 7);
  CHECK(split2.p_part.order() == 1);
  CHECK(split2.r_part.order() == 1);
  CHECK(split2.coprime_part.order() == 3);

  CHECK_THROWS_AS(nilpotent_sylow_decomposition(s3(), 2, 3), HypothesisError);
}

TEST_CASE("Lagrange holds for generated subgroups") {
  std::mt19937_64 rng(2024);
  for (auto builder : {s3, q8, d8, heisenberg27}) {
    FiniteGroup g = builder();
    for (int trial = 0; trial < 10; ++trial) {
      int a = static_cast<int>(rng() % g.n), b = static_cast<int>(rng() % g.n);
      Subgroup s = subgroup_closure(g, {a, b});
      CHECK(g.n % s.order() == 0);
      CHECK(s.contains(0));
    }
  }
}

TEST_CASE("subgroup_as_group preserves structure") {
  FiniteGroup g = q8();
  Subgroup zi = subgroup_closure(g, {g.gens[0]});
  auto sub = subgroup_as_group(g, zi);
  CHECK(sub.group.n == 4);
  CHECK(exponent_of(sub.group) == 4);
  // embedding respects multiplication
  for (int a = 0; a < sub.group.n; ++a)
    for (int b = 0; b < sub.group.n; ++b)
      CHECK(sub.to_parent[sub.group.mul(a, b)] == g.mul(sub.to_parent[a], sub.to_parent[b]));
}
