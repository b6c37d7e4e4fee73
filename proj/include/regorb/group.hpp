#pragma once

// Finite groups as explicit multiplication tables, built by generator closure
// from faithful images (permutations or invertible matrices over a prime
// field) or assembled from other tables (subgroups, quotients, semidirect
// products). Element 0 is always the identity. Composition is left-to-right
// throughout: (x*y) means "apply x, then y", matching the row-vector matrix
// convention, so permutations compose as (s*t)(i) = t(s(i)).
//
// Structural properties (normality, homomorphism, automorphism) are verified
// exhaustively rather than trusted; at the table sizes this library allows
// (order <= 5000) that is cheap and removes a whole class of bugs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "regorb/fpmatrix.hpp"

namespace regorb {

constexpr int kGroupOrderCap = 5000;

struct Perm {
  std::vector<int> img;

  int degree() const { return static_cast<int>(img.size()); }
  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (img[i] != i) return false;
    return true;
  }
};

inline Perm perm_identity(int n) {
  Perm p;
  p.img.resize(n);
  std::iota(p.img.begin(), p.img.end(), 0);
  return p;
}

// Apply a first, then b.
inline Perm perm_compose(const Perm& a, const Perm& b) {
  Perm r;
  r.img.resize(a.degree());
  for (int i = 0; i < a.degree(); ++i) r.img[i] = b.img[a.img[i]];
  return r;
}

inline Perm perm_inverse(const Perm& a) {
  Perm r;
  r.img.resize(a.degree());
  for (int i = 0; i < a.degree(); ++i) r.img[a.img[i]] = i;
  return r;
}

inline bool perm_is_valid(const Perm& a) {
  std::vector<char> seen(a.img.size(), 0);
  for (int v : a.img) {
    if (v < 0 || v >= a.degree() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// Faithful image of a group element: a permutation or an invertible matrix.
struct GenImage {
  enum class Kind { perm, mat } kind = Kind::perm;
  Perm perm;
  Matrix mat;

  static GenImage of(Perm p) {
    GenImage g;
    g.kind = Kind::perm;
    g.perm = std::move(p);
    return g;
  }
  static GenImage of(Matrix m) {
    GenImage g;
    g.kind = Kind::mat;
    g.mat = std::move(m);
    return g;
  }

  std::vector<i64> key() const {
    if (kind == Kind::perm) {
      std::vector<i64> k(perm.img.begin(), perm.img.end());
      return k;
    }
    return mat.a;
  }
};

inline GenImage image_compose(const GenImage& a, const GenImage& b) {
  if (a.kind != b.kind) throw DomainError("cannot mix permutation and matrix generators");
  if (a.kind == GenImage::Kind::perm) return GenImage::of(perm_compose(a.perm, b.perm));
  return GenImage::of(mat_mul(a.mat, b.mat));
}

struct FiniteGroup {
  int n = 1;
  std::vector<uint16_t> tbl;          // n*n, tbl[a*n+b] = a*b
  std::vector<int> inv;
  std::vector<int> gens;              // element indices of the generators
  std::vector<std::vector<int>> word; // per element, sequence of generator slots
  std::vector<GenImage> images;       // optional faithful images (empty if none)

  int mul(int a, int b) const { return tbl[static_cast<size_t>(a) * n + b]; }
  int inverse(int a) const { return inv[a]; }
  int conjugate(int x, int g) const { return mul(mul(inverse(g), x), g); }

  i64 order_of(int x) const {
    i64 k = 1;
    int cur = x;
    while (cur != 0) {
      cur = mul(cur, x);
      ++k;
    }
    return k;
  }

  int power(int x, i64 e) const {
    int r = 0;
    int base = x;
    if (e < 0) {
      base = inverse(x);
      e = -e;
    }
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
};

namespace detail {

// Latin square + identity + inverse checks shared by every construction path.
inline void verify_table(FiniteGroup& g) {
  const int n = g.n;
  if (n < 1) throw InternalError("empty group table");
  if (n > kGroupOrderCap) throw CapError("group order exceeds the table cap of 5000");
  std::vector<char> seen(n);
  for (int a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int b = 0; b < n; ++b) {
      int v = g.mul(a, b);
      if (v < 0 || v >= n || seen[v]) throw InternalError("row of multiplication table is not a permutation");
      seen[v] = 1;
    }
  }
  for (int b = 0; b < n; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int a = 0; a < n; ++a) {
      int v = g.mul(a, b);
      if (seen[v]) throw InternalError("column of multiplication table is not a permutation");
      seen[v] = 1;
    }
  }
  for (int a = 0; a < n; ++a)
    if (g.mul(0, a) != a || g.mul(a, 0) != a) throw InternalError("element 0 is not the identity");
  g.inv.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == 0 && g.mul(b, a) == 0) {
        g.inv[a] = b;
        break;
      }
    if (g.inv[a] < 0) throw InternalError("element without two-sided inverse");
  }
}

// Generator words by breadth-first search over the table.
inline void compute_words(FiniteGroup& g) {
  g.word.assign(g.n, {});
  std::vector<char> found(g.n, 0);
  found[0] = 1;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int cur = q.front();
    q.pop();
    for (size_t s = 0; s < g.gens.size(); ++s) {
      int nxt = g.mul(cur, g.gens[s]);
      if (found[nxt]) continue;
      found[nxt] = 1;
      g.word[nxt] = g.word[cur];
      g.word[nxt].push_back(static_cast<int>(s));
      q.push(nxt);
    }
  }
  if (!std::all_of(found.begin(), found.end(), [](char c) { return c != 0; }))
    throw InternalError("stored generators do not generate the group");
}

}  // namespace detail

inline FiniteGroup trivial_group() {
  FiniteGroup g;
  g.n = 1;
  g.tbl = {0};
  g.inv = {0};
  return g;
}

// Closure of faithful generator images. Provenance (image + word) is kept for
// every element.
inline FiniteGroup close_generators(const std::vector<GenImage>& generators, int cap = kGroupOrderCap) {
  if (generators.empty()) return trivial_group();
  if (cap > kGroupOrderCap) cap = kGroupOrderCap;
  for (const auto& g : generators) {
    if (g.kind == GenImage::Kind::perm) {
      if (!perm_is_valid(g.perm)) throw DomainError("generator is not a permutation");
      if (g.perm.degree() != generators[0].perm.degree())
        throw DomainError("permutation generators act on different point sets");
    } else {
      if (generators[0].kind != GenImage::Kind::mat) throw DomainError("cannot mix generator kinds");
      if (g.mat.rows != g.mat.cols || !mat_is_invertible(g.mat))
        throw DomainError("matrix generator is singular");
      if (g.mat.rows != generators[0].mat.rows || g.mat.mod != generators[0].mat.mod)
        throw DomainError("matrix generators have mismatched shapes or fields");
    }
  }
  GenImage id = generators[0].kind == GenImage::Kind::perm
                    ? GenImage::of(perm_identity(generators[0].perm.degree()))
                    : GenImage::of(Matrix::identity(generators[0].mat.rows, generators[0].mat.mod));

  FiniteGroup g;
  std::map<std::vector<i64>, int> index;
  std::vector<GenImage> elems;
  elems.push_back(id);
  index[id.key()] = 0;
  g.word.push_back({});

  // generator elements first, so their indices are stable
  g.gens.clear();
  for (size_t s = 0; s < generators.size(); ++s) {
    auto key = generators[s].key();
    auto it = index.find(key);
    int idx;
    if (it == index.end()) {
      idx = static_cast<int>(elems.size());
      elems.push_back(generators[s]);
      index[key] = idx;
      g.word.push_back({static_cast<int>(s)});
    } else {
      idx = it->second;
    }
    g.gens.push_back(idx);
  }

  std::queue<int> q;
  for (int i = 0; i < static_cast<int>(elems.size()); ++i) q.push(i);
  while (!q.empty()) {
    int cur = q.front();
    q.pop();
    for (size_t s = 0; s < generators.size(); ++s) {
      GenImage nxt = image_compose(elems[cur], generators[s]);
      auto key = nxt.key();
      if (index.count(key)) continue;
      if (static_cast<int>(elems.size()) >= cap)
        throw CapError("generator closure exceeds the size cap");
      int idx = static_cast<int>(elems.size());
      index[key] = idx;
      elems.push_back(std::move(nxt));
      auto w = g.word[cur];
      w.push_back(static_cast<int>(s));
      g.word.push_back(std::move(w));
      q.push(idx);
    }
  }

  g.n = static_cast<int>(elems.size());
  g.tbl.assign(static_cast<size_t>(g.n) * g.n, 0);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      GenImage prod = image_compose(elems[a], elems[b]);
      auto it = index.find(prod.key());
      if (it == index.end()) throw InternalError("closure is not closed under products");
      g.tbl[static_cast<size_t>(a) * g.n + b] = static_cast<uint16_t>(it->second);
    }
  g.images = std::move(elems);
  detail::verify_table(g);
  return g;
}

// ---------------------------------------------------------------------------
// Subgroups

struct Subgroup {
  const FiniteGroup* G = nullptr;
  std::vector<int> elems;  // sorted
  std::vector<int> gens;   // parent indices; may be empty (unknown)

  bool contains(int x) const { return std::binary_search(elems.begin(), elems.end(), x); }
  i64 order() const { return static_cast<i64>(elems.size()); }
  bool is_trivial() const { return elems.size() == 1; }
};

inline Subgroup subgroup_closure(const FiniteGroup& G, const std::vector<int>& generators) {
  // BFS by right multiplication with the generators; inverses are positive
  // words in a finite group, so this reaches the whole subgroup.
  std::vector<char> in(G.n, 0);
  in[0] = 1;
  std::vector<int> queue{0};
  for (size_t head = 0; head < queue.size(); ++head) {
    int cur = queue[head];
    for (int g : generators) {
      int nxt = G.mul(cur, g);
      if (!in[nxt]) {
        in[nxt] = 1;
        queue.push_back(nxt);
      }
    }
  }
  Subgroup s;
  s.G = &G;
  for (int i = 0; i < G.n; ++i)
    if (in[i]) s.elems.push_back(i);
  s.gens = generators;
  return s;
}

inline Subgroup whole_group(const FiniteGroup& G) {
  Subgroup s;
  s.G = &G;
  s.elems.resize(G.n);
  std::iota(s.elems.begin(), s.elems.end(), 0);
  s.gens = G.gens;
  return s;
}

inline Subgroup trivial_subgroup(const FiniteGroup& G) {
  Subgroup s;
  s.G = &G;
  s.elems = {0};
  return s;
}

inline bool is_normal(const FiniteGroup& G, const Subgroup& S) {
  // conjugation by generators suffices; every conjugator is a word in them
  std::vector<int> conjugators = G.gens;
  if (conjugators.empty()) {
    conjugators.resize(G.n);
    std::iota(conjugators.begin(), conjugators.end(), 0);
  }
  for (int g : conjugators)
    for (int s : S.elems)
      if (!S.contains(G.conjugate(s, g))) return false;
  return true;
}

inline Subgroup centralizer(const FiniteGroup& G, const std::vector<int>& targets) {
  Subgroup s;
  s.G = &G;
  for (int g = 0; g < G.n; ++g) {
    bool ok = true;
    for (int t : targets)
      if (G.mul(g, t) != G.mul(t, g)) {
        ok = false;
        break;
      }
    if (ok) s.elems.push_back(g);
  }
  return s;
}

inline Subgroup centralizer(const FiniteGroup& G, const Subgroup& S) {
  // centralizing a generating set centralizes the subgroup
  return centralizer(G, S.gens.empty() ? S.elems : S.gens);
}

inline Subgroup center(const FiniteGroup& G) { return centralizer(G, whole_group(G).elems); }

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  Subgroup s;
  s.G = a.G;
  std::set_intersection(a.elems.begin(), a.elems.end(), b.elems.begin(), b.elems.end(),
                        std::back_inserter(s.elems));
  return s;
}

// Standalone copy of a subgroup. The group lives behind a shared_ptr so that
// modules holding a FiniteGroup* stay valid when this struct is moved.
struct SubgroupGroup {
  std::shared_ptr<FiniteGroup> group_ptr = std::make_shared<FiniteGroup>();
  std::vector<int> to_parent;  // element index in `group` -> index in parent

  const FiniteGroup& group() const { return *group_ptr; }
};

// The subgroup as a standalone multiplication-table group, identity first.
inline SubgroupGroup subgroup_as_group(const FiniteGroup& G, const Subgroup& S) {
  SubgroupGroup out;
  out.to_parent = S.elems;  // sorted, so identity (0) comes first
  std::vector<int> pos(G.n, -1);
  for (size_t i = 0; i < S.elems.size(); ++i) pos[S.elems[i]] = static_cast<int>(i);
  FiniteGroup& H = *out.group_ptr;
  H.n = static_cast<int>(S.elems.size());
  H.tbl.assign(static_cast<size_t>(H.n) * H.n, 0);
  for (int a = 0; a < H.n; ++a)
    for (int b = 0; b < H.n; ++b) {
      int prod = G.mul(S.elems[a], S.elems[b]);
      if (pos[prod] < 0) throw InternalError("subgroup element set is not closed");
      H.tbl[static_cast<size_t>(a) * H.n + b] = static_cast<uint16_t>(pos[prod]);
    }
  detail::verify_table(H);
  // generators: recorded ones if any, otherwise greedy
  std::vector<int> gens;
  if (!S.gens.empty()) {
    for (int g : S.gens)
      if (pos[g] > 0) gens.push_back(pos[g]);
  }
  Subgroup have = subgroup_closure(H, gens);
  for (int i = 1; i < H.n && have.order() < H.n; ++i) {
    if (!have.contains(i)) {
      gens.push_back(i);
      have = subgroup_closure(H, gens);
    }
  }
  H.gens = gens;
  detail::compute_words(H);
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms and quotients

struct Homomorphism {
  const FiniteGroup* src = nullptr;
  const FiniteGroup* dst = nullptr;
  std::vector<int> img;
};

inline bool verify_homomorphism(const Homomorphism& h) {
  if (h.img[0] != 0) return false;
  for (int a = 0; a < h.src->n; ++a)
    for (int b = 0; b < h.src->n; ++b)
      if (h.img[h.src->mul(a, b)] != h.dst->mul(h.img[a], h.img[b])) return false;
  return true;
}

struct QuotientGroup {
  FiniteGroup group;
  std::vector<int> proj;       // parent element -> quotient element
  std::vector<int> coset_rep;  // quotient element -> least parent representative
};

inline QuotientGroup quotient_group(const FiniteGroup& G, const Subgroup& N) {
  if (!is_normal(G, N)) throw HypothesisError("subgroup is not normal; cannot form the quotient");
  QuotientGroup out;
  std::vector<int> coset_of(G.n, -1);
  std::vector<int> reps;
  for (int g = 0; g < G.n; ++g) {
    if (coset_of[g] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(g);  // g is the least element of its coset by scan order
    for (int x : N.elems) coset_of[G.mul(g, x)] = id;
  }
  int m = static_cast<int>(reps.size());
  FiniteGroup& Q = out.group;
  Q.n = m;
  Q.tbl.assign(static_cast<size_t>(m) * m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      Q.tbl[static_cast<size_t>(a) * m + b] = static_cast<uint16_t>(coset_of[G.mul(reps[a], reps[b])]);
  detail::verify_table(Q);
  // generators: images of G's generators (fall back to greedy if G has none)
  std::vector<int> gens;
  for (int g : G.gens)
    if (coset_of[g] != 0) gens.push_back(coset_of[g]);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  Subgroup have = subgroup_closure(Q, gens);
  for (int i = 1; i < m && have.order() < m; ++i)
    if (!have.contains(i)) {
      gens.push_back(i);
      have = subgroup_closure(Q, gens);
    }
  Q.gens = gens;
  detail::compute_words(Q);
  out.proj = coset_of;
  out.coset_rep = reps;
  Homomorphism h{&G, &Q, out.proj};
  if (!verify_homomorphism(h)) throw InternalError("quotient projection is not a homomorphism");
  return out;
}

// ---------------------------------------------------------------------------
// Automorphisms and (semi)direct products

inline bool is_automorphism(const FiniteGroup& G, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != G.n || f[0] != 0) return false;
  std::vector<char> seen(G.n, 0);
  for (int v : f) {
    if (v < 0 || v >= G.n || seen[v]) return false;
    seen[v] = 1;
  }
  for (int a = 0; a < G.n; ++a)
    for (int b = 0; b < G.n; ++b)
      if (f[G.mul(a, b)] != G.mul(f[a], f[b])) return false;
  return true;
}

inline std::vector<int> compose_maps(const std::vector<int>& f, const std::vector<int>& g) {
  std::vector<int> r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = g[f[i]];  // apply f first
  return r;
}

inline std::vector<int> invert_map(const std::vector<int>& f) {
  std::vector<int> r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[f[i]] = static_cast<int>(i);
  return r;
}

struct ProductGroup {
  FiniteGroup group;
  std::vector<int> embed_n;  // N element -> product element
  std::vector<int> embed_h;  // H element -> product element
};

// Semidirect product N x| H. `action` gives, per generator of H, the
// automorphism of N induced by right conjugation (n |-> h^-1 n h). An empty
// list means the trivial action, i.e. the direct product. The per-generator
// assignment must extend to a homomorphism H -> Aut(N); this is verified on
// the full table and rejected otherwise.
inline ProductGroup product_group(const FiniteGroup& N, const FiniteGroup& H,
                                  const std::vector<std::vector<int>>& action) {
  if (static_cast<i64>(N.n) * H.n > kGroupOrderCap)
    throw CapError("product order exceeds the table cap");
  std::vector<std::vector<int>> gen_act = action;
  if (action.empty()) {
    std::vector<int> id(N.n);
    std::iota(id.begin(), id.end(), 0);
    gen_act.assign(H.gens.size(), id);
  }
  if (gen_act.size() != H.gens.size())
    throw DomainError("need one automorphism per generator of the acting group");
  for (const auto& f : gen_act)
    if (!is_automorphism(N, f)) throw DomainError("action image is not an automorphism");

  // extend along words, then verify the extension is a homomorphism
  std::vector<int> id(N.n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> act(H.n);
  for (int h = 0; h < H.n; ++h) {
    std::vector<int> f = id;
    for (int s : H.word[h]) f = compose_maps(f, gen_act[s]);
    act[h] = std::move(f);
  }
  for (int h = 0; h < H.n; ++h)
    for (size_t s = 0; s < H.gens.size(); ++s)
      if (act[H.mul(h, H.gens[s])] != compose_maps(act[h], gen_act[s]))
        throw DomainError("action does not respect the relations of the acting group");

  ProductGroup out;
  FiniteGroup& P = out.group;
  P.n = N.n * H.n;
  P.tbl.assign(static_cast<size_t>(P.n) * P.n, 0);
  auto idx = [&](int x, int h) { return h * N.n + x; };
  for (int h1 = 0; h1 < H.n; ++h1) {
    const std::vector<int>& twist = act[H.inverse(h1)];
    for (int h2 = 0; h2 < H.n; ++h2) {
      int h12 = H.mul(h1, h2);
      for (int x1 = 0; x1 < N.n; ++x1) {
        size_t base = static_cast<size_t>(idx(x1, h1)) * P.n;
        for (int x2 = 0; x2 < N.n; ++x2)
          P.tbl[base + idx(x2, h2)] = static_cast<uint16_t>(idx(N.mul(x1, twist[x2]), h12));
      }
    }
  }
  detail::verify_table(P);
  out.embed_n.resize(N.n);
  for (int x = 0; x < N.n; ++x) out.embed_n[x] = idx(x, 0);
  out.embed_h.resize(H.n);
  for (int h = 0; h < H.n; ++h) out.embed_h[h] = idx(0, h);
  for (int g : N.gens) P.gens.push_back(out.embed_n[g]);
  for (int g : H.gens) P.gens.push_back(out.embed_h[g]);
  Subgroup have = subgroup_closure(P, P.gens);
  for (int i = 1; i < P.n && have.order() < P.n; ++i)
    if (!have.contains(i)) {
      P.gens.push_back(i);
      have = subgroup_closure(P, P.gens);
    }
  detail::compute_words(P);
  return out;
}

// ---------------------------------------------------------------------------
// Structural invariants

inline Subgroup derived_subgroup(const FiniteGroup& G) {
  std::vector<char> comm(G.n, 0);
  for (int a = 0; a < G.n; ++a)
    for (int b = 0; b < G.n; ++b)
      comm[G.mul(G.mul(G.inverse(a), G.inverse(b)), G.mul(a, b))] = 1;
  std::vector<int> gens;
  for (int i = 1; i < G.n; ++i)
    if (comm[i]) gens.push_back(i);
  return subgroup_closure(G, gens);
}

inline Subgroup commutator_with_group(const FiniteGroup& G, const Subgroup& S) {
  std::vector<char> comm(G.n, 0);
  for (int a : S.elems)
    for (int b = 0; b < G.n; ++b)
      comm[G.mul(G.mul(G.inverse(a), G.inverse(b)), G.mul(a, b))] = 1;
  std::vector<int> gens;
  for (int i = 1; i < G.n; ++i)
    if (comm[i]) gens.push_back(i);
  return subgroup_closure(G, gens);
}

inline i64 exponent_of(const FiniteGroup& G) {
  i64 e = 1;
  for (int g = 0; g < G.n; ++g) e = lcm_i64(e, G.order_of(g));
  return e;
}

inline bool is_prime_power(i64 n, i64& prime) {
  if (n <= 1) return false;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0) n /= d;
      if (n == 1) {
        prime = d;
        return true;
      }
      return false;
    }
  }
  prime = n;
  return true;
}

// All subgroups, by closing upward from cyclic seeds. Exponential in general;
// guarded by a count cap and only meant for small oracle computations.
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& G, size_t cap = 20000) {
  std::map<std::vector<int>, Subgroup> found;
  std::vector<Subgroup> seeds;
  for (int g = 0; g < G.n; ++g) {
    Subgroup s = subgroup_closure(G, {g});
    if (!found.count(s.elems)) {
      found[s.elems] = s;
      seeds.push_back(s);
    }
  }
  std::vector<Subgroup> frontier(seeds);
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const Subgroup& h : frontier) {
      for (int g = 0; g < G.n; ++g) {
        if (h.contains(g)) continue;
        std::vector<int> gens = h.gens;
        gens.push_back(g);
        Subgroup s = subgroup_closure(G, gens);
        if (!found.count(s.elems)) {
          if (found.size() >= cap) throw CapError("subgroup lattice enumeration cap exceeded");
          found[s.elems] = s;
          next.push_back(s);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out;
  for (auto& [k, v] : found) out.push_back(v);
  return out;
}

inline std::vector<Subgroup> maximal_subgroups(const FiniteGroup& G) {
  auto subs = all_subgroups(G);
  std::vector<Subgroup> proper;
  for (auto& s : subs)
    if (s.order() < G.n) proper.push_back(s);
  std::vector<Subgroup> maximal;
  for (size_t i = 0; i < proper.size(); ++i) {
    bool is_max = true;
    for (size_t j = 0; j < proper.size() && is_max; ++j) {
      if (i == j) continue;
      if (proper[j].order() > proper[i].order() &&
          std::includes(proper[j].elems.begin(), proper[j].elems.end(), proper[i].elems.begin(),
                        proper[i].elems.end()))
        is_max = false;
    }
    if (is_max) maximal.push_back(proper[i]);
  }
  return maximal;
}

// Frattini subgroup. For q-groups this is the agemo formula G' * G^q; for
// other groups of order <= 200 it falls back to intersecting the maximal
// subgroups directly.
inline Subgroup frattini_subgroup(const FiniteGroup& G) {
  i64 q = 0;
  if (G.n == 1) return trivial_subgroup(G);
  if (is_prime_power(G.n, q)) {
    Subgroup d = derived_subgroup(G);
    std::vector<int> gens = d.gens;
    for (int g = 0; g < G.n; ++g) gens.push_back(G.power(g, q));
    return subgroup_closure(G, gens);
  }
  if (G.n > 200)
    throw HypothesisError("Frattini subgroup supported only for prime-power order (or order <= 200)");
  auto maxes = maximal_subgroups(G);
  Subgroup acc = whole_group(G);
  for (const auto& m : maxes) acc = intersect(acc, m);
  acc.gens.clear();
  return acc;
}

struct GroupInvariants {
  Subgroup center;
  Subgroup derived;
  std::vector<Subgroup> lower_central;  // gamma_2, gamma_3, ...
  std::optional<int> nilpotency_class;  // empty if not nilpotent
  i64 exponent = 1;
  std::optional<Subgroup> frattini;     // present for prime-power order
};

inline GroupInvariants group_invariants(const FiniteGroup& G) {
  GroupInvariants inv{center(G), derived_subgroup(G), {}, std::nullopt, exponent_of(G), std::nullopt};
  Subgroup gamma = inv.derived;
  inv.lower_central.push_back(gamma);
  while (gamma.order() > 1) {
    Subgroup next = commutator_with_group(G, gamma);
    if (next.order() == gamma.order()) break;  // stabilized above the identity
    gamma = next;
    inv.lower_central.push_back(gamma);
  }
  if (inv.lower_central.back().order() == 1)
    inv.nilpotency_class = static_cast<int>(inv.lower_central.size());
  i64 q = 0;
  if (G.n == 1) inv.nilpotency_class = 1;
  if (is_prime_power(G.n, q) || G.n == 1) inv.frattini = frattini_subgroup(G);
  return inv;
}

// ---------------------------------------------------------------------------
// Conjugacy data

struct ConjugacyData {
  int k = 0;
  std::vector<int> rep;                   // least-index representatives
  std::vector<i64> size;
  std::vector<int> class_of;
  std::vector<std::vector<int>> members;
  std::vector<i64> rep_order;
  i64 exponent = 1;
  std::vector<std::vector<int>> power_class;  // power_class[i][m] = class of rep_i^m

  int inverse_class(int i) const { return power_class[i][static_cast<size_t>(rep_order[i]) - 1]; }
};

inline ConjugacyData conjugacy_classes(const FiniteGroup& G) {
  ConjugacyData c;
  c.class_of.assign(G.n, -1);
  for (int x = 0; x < G.n; ++x) {
    if (c.class_of[x] >= 0) continue;
    int id = c.k++;
    c.rep.push_back(x);
    std::vector<int> mem;
    for (int g = 0; g < G.n; ++g) {
      int y = G.conjugate(x, g);
      if (c.class_of[y] < 0) {
        c.class_of[y] = id;
        mem.push_back(y);
      }
    }
    std::sort(mem.begin(), mem.end());
    c.size.push_back(static_cast<i64>(mem.size()));
    c.members.push_back(std::move(mem));
  }
  for (int i = 0; i < c.k; ++i) c.rep_order.push_back(G.order_of(c.rep[i]));
  c.exponent = 1;
  for (i64 o : c.rep_order) c.exponent = lcm_i64(c.exponent, o);
  // exponent must account for all elements, not only representatives; class
  // members share the representative's order, so this is already complete.
  c.power_class.assign(c.k, {});
  for (int i = 0; i < c.k; ++i) {
    c.power_class[i].resize(static_cast<size_t>(c.exponent));
    int cur = 0;
    for (i64 m = 0; m < c.exponent; ++m) {
      c.power_class[i][static_cast<size_t>(m)] = c.class_of[cur];
      cur = G.mul(cur, c.rep[i]);
    }
  }
  i64 total = std::accumulate(c.size.begin(), c.size.end(), i64{0});
  if (total != G.n) throw InternalError("conjugacy classes do not partition the group");
  return c;
}

// ---------------------------------------------------------------------------
// Sylow decomposition of a nilpotent group

struct SylowSplit {
  Subgroup p_part, r_part, coprime_part;
  bool p_cyclic = false, r_cyclic = false;
};

inline SylowSplit nilpotent_sylow_decomposition(const FiniteGroup& A, i64 p, i64 r) {
  GroupInvariants inv = group_invariants(A);
  if (!inv.nilpotency_class.has_value())
    throw HypothesisError("group is not nilpotent; Sylow decomposition undefined here");
  auto part_of = [&](auto pred) {
    std::vector<int> elems;
    for (int g = 0; g < A.n; ++g)
      if (pred(A.order_of(g))) elems.push_back(g);
    Subgroup s = subgroup_closure(A, elems);
    if (s.order() != static_cast<i64>(elems.size()))
      throw InternalError("torsion part is not a subgroup despite nilpotency");
    return s;
  };
  auto is_power_of = [](i64 n, i64 q) {
    while (n % q == 0) n /= q;
    return n == 1;
  };
  SylowSplit out;
  out.p_part = part_of([&](i64 o) { return is_power_of(o, p); });
  out.r_part = part_of([&](i64 o) { return is_power_of(o, r); });
  out.coprime_part = part_of([&](i64 o) { return o % p != 0 && o % r != 0; });
  if (out.p_part.order() * out.r_part.order() * out.coprime_part.order() != A.n)
    throw InternalError("Sylow parts do not multiply up to the group order");
  auto cyclic = [&](const Subgroup& s) {
    for (int g : s.elems)
      if (A.order_of(g) == s.order()) return true;
    return false;
  };
  out.p_cyclic = cyclic(out.p_part);
  out.r_cyclic = cyclic(out.r_part);
  return out;
}

}  // namespace regorb
