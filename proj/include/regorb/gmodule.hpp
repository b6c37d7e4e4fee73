#pragma once

// Linear actions of finite groups on F_p^d (row vectors, right action), with
// the orbit machinery a regular-orbit search needs: full vector scans,
// homogeneous decomposition of a semisimple restriction, Hom-space modules
// over the endomorphism field of an irreducible, and the tensor reassembly
// X (x)_E U -> W of a homogeneous component.
//
// Fields of endomorphism rings are never materialized as field objects; an
// element of E = End_C(X) is just an intertwining matrix, and E-linearity of
// a map shows up as divisibility of F_p-ranks by [E:F_p].

#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "regorb/group.hpp"

namespace regorb {

constexpr i64 kScanCap = i64{1} << 24;
constexpr uint64_t kDefaultSeed = 0x5eed5eed5eedULL;

struct GModule {
  const FiniteGroup* G = nullptr;
  i64 p = 2;
  int dim = 0;
  std::vector<Matrix> rho;   // per element
  std::vector<int> kernel;   // sorted element indices acting as the identity

  const Matrix& act(int g) const { return rho[g]; }
  i64 faithful_quotient_order() const { return G->n / static_cast<i64>(kernel.size()); }
};

inline GModule module_from_generators(const FiniteGroup& G, const std::vector<Matrix>& gen_mats,
                                      i64 p, int dim_if_no_generators = 0) {
  if (gen_mats.size() != G.gens.size())
    throw DomainError("need exactly one matrix per group generator");
  int dim = gen_mats.empty() ? dim_if_no_generators : gen_mats[0].rows;
  for (const Matrix& m : gen_mats) {
    if (m.rows != m.cols || m.rows != dim || m.mod != p)
      throw DomainError("generator matrices must be square, equal-sized, same field");
    if (!mat_is_invertible(m)) throw DomainError("generator matrix is singular");
  }
  GModule M;
  M.G = &G;
  M.p = p;
  M.dim = dim;
  M.rho.resize(G.n, Matrix::identity(dim, p));
  for (int g = 0; g < G.n; ++g) {
    Matrix acc = Matrix::identity(dim, p);
    for (int s : G.word[g]) acc = mat_mul(acc, gen_mats[s]);
    M.rho[g] = std::move(acc);
  }
  for (int a = 0; a < G.n; ++a)
    for (int b = 0; b < G.n; ++b)
      if (!(mat_mul(M.rho[a], M.rho[b]) == M.rho[G.mul(a, b)]))
        throw DomainError("matrix assignment does not extend to a homomorphism");
  Matrix id = Matrix::identity(dim, p);
  for (int g = 0; g < G.n; ++g)
    if (M.rho[g] == id) M.kernel.push_back(g);
  return M;
}

// Every element acting as the identity.
inline GModule trivial_module(const FiniteGroup& G, int dim, i64 p) {
  GModule M;
  M.G = &G;
  M.p = p;
  M.dim = dim;
  M.rho.assign(G.n, Matrix::identity(dim, p));
  M.kernel.resize(G.n);
  std::iota(M.kernel.begin(), M.kernel.end(), 0);
  return M;
}

// Restriction of a module to a subgroup presented as a standalone group.
inline GModule module_restrict(const GModule& M, const SubgroupGroup& sub) {
  GModule R;
  R.G = &sub.group;
  R.p = M.p;
  R.dim = M.dim;
  R.rho.reserve(sub.group.n);
  for (int i = 0; i < sub.group.n; ++i) R.rho.push_back(M.rho[sub.to_parent[i]]);
  Matrix id = Matrix::identity(M.dim, M.p);
  for (int g = 0; g < sub.group.n; ++g)
    if (R.rho[g] == id) R.kernel.push_back(g);
  return R;
}

inline GModule dual_module(const GModule& M) {
  GModule D;
  D.G = M.G;
  D.p = M.p;
  D.dim = M.dim;
  D.rho.reserve(M.rho.size());
  for (int g = 0; g < M.G->n; ++g) D.rho.push_back(mat_transpose(M.rho[M.G->inverse(g)]));
  D.kernel = M.kernel;
  return D;
}

// --------------------------------------------------------------------------
// Vector enumeration (lexicographic: first coordinate most significant)

inline i64 vector_space_size(i64 p, int dim) {
  i64 total = 1;
  for (int i = 0; i < dim; ++i) {
    total *= p;
    if (total > kScanCap) return -1;  // beyond the documented cap
  }
  return total;
}

inline Vec decode_vector(i64 code, i64 p, int dim) {
  Vec v(dim);
  for (int i = dim - 1; i >= 0; --i) {
    v[i] = code % p;
    code /= p;
  }
  return v;
}

inline i64 encode_vector(const Vec& v, i64 p) {
  i64 code = 0;
  for (i64 x : v) code = code * p + x;
  return code;
}

// --------------------------------------------------------------------------
// Orbits and stabilizers

inline std::vector<int> stabilizer_elements(const GModule& M, const Vec& v) {
  std::vector<int> out;
  for (int g = 0; g < M.G->n; ++g)
    if (vec_mat(v, M.rho[g]) == v) out.push_back(g);
  return out;
}

// Elements acting as the identity on the row space of `basis`.
inline std::vector<int> pointwise_stabilizer(const GModule& M, const Matrix& basis) {
  std::vector<int> out;
  for (int g = 0; g < M.G->n; ++g) {
    bool fixes = true;
    for (int i = 0; i < basis.rows && fixes; ++i) {
      Vec r = basis.row(i);
      fixes = vec_mat(r, M.rho[g]) == r;
    }
    if (fixes) out.push_back(g);
  }
  return out;
}

struct OrbitReport {
  Vec base;
  std::vector<Vec> orbit;  // sorted lexicographically
  i64 size = 0;
  Subgroup stabilizer;
  int span_rank = 0;
  bool regular_orbit = false;
  bool regular_module = false;
};

inline OrbitReport orbit_and_stabilizer(const GModule& M, const Vec& v) {
  if (static_cast<int>(v.size()) != M.dim) throw DomainError("vector dimension mismatch");
  OrbitReport rep;
  rep.base = v;
  for (auto& x : rep.base) x = fp_reduce(x, M.p);
  std::set<Vec> orbit;
  for (int g = 0; g < M.G->n; ++g) orbit.insert(vec_mat(rep.base, M.rho[g]));
  rep.orbit.assign(orbit.begin(), orbit.end());
  rep.size = static_cast<i64>(rep.orbit.size());
  Subgroup stab;
  stab.G = M.G;
  stab.elems = stabilizer_elements(M, rep.base);
  rep.stabilizer = std::move(stab);
  if (rep.size * rep.stabilizer.order() != M.G->n)
    throw InternalError("orbit-stabilizer identity failed");
  rep.span_rank = span_basis(rep.orbit, M.dim, M.p).rows;
  rep.regular_orbit = rep.stabilizer.elems == M.kernel;
  rep.regular_module = rep.regular_orbit && rep.span_rank == static_cast<int>(rep.size);
  return rep;
}

struct ScanReport {
  std::optional<Vec> regular_orbit_witness;
  std::optional<Vec> regular_module_witness;
  std::map<i64, i64> histogram;  // orbit size -> number of orbits
  i64 orbit_count = 0;
  bool complete = true;  // false when an early exit was taken
};

// Full scan of the vector space. Each orbit is visited at its least vector,
// so witnesses are automatically the lexicographically least ones.
inline ScanReport regular_orbit_scan(const GModule& M, bool early_exit_on_module_witness = false) {
  i64 total = vector_space_size(M.p, M.dim);
  if (total < 0) throw CapError("vector scan space exceeds 2^24");
  ScanReport rep;
  i64 regular_size = M.G->n / static_cast<i64>(M.kernel.size());
  std::vector<char> visited(static_cast<size_t>(total), 0);
  std::vector<i64> frontier, orbit_codes;
  for (i64 code = 0; code < total; ++code) {
    if (visited[static_cast<size_t>(code)]) continue;
    orbit_codes.clear();
    frontier.clear();
    frontier.push_back(code);
    visited[static_cast<size_t>(code)] = 1;
    while (!frontier.empty()) {
      i64 cur = frontier.back();
      frontier.pop_back();
      orbit_codes.push_back(cur);
      Vec v = decode_vector(cur, M.p, M.dim);
      for (int s : M.G->gens) {
        i64 nxt = encode_vector(vec_mat(v, M.rho[s]), M.p);
        if (!visited[static_cast<size_t>(nxt)]) {
          visited[static_cast<size_t>(nxt)] = 1;
          frontier.push_back(nxt);
        }
      }
    }
    i64 size = static_cast<i64>(orbit_codes.size());
    rep.histogram[size] += 1;
    rep.orbit_count += 1;
    if (size == regular_size) {
      Vec v = decode_vector(code, M.p, M.dim);
      if (!rep.regular_orbit_witness) rep.regular_orbit_witness = v;
      if (!rep.regular_module_witness && size <= M.dim) {
        std::vector<Vec> vecs;
        for (i64 c : orbit_codes) vecs.push_back(decode_vector(c, M.p, M.dim));
        if (span_basis(vecs, M.dim, M.p).rows == static_cast<int>(size)) {
          rep.regular_module_witness = v;
          if (early_exit_on_module_witness) {
            rep.complete = false;
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

// --------------------------------------------------------------------------
// Hom spaces between invariant subspaces

// Basis of the space of C-equivariant maps X -> W, where X and W are
// invariant row spaces. Maps are returned in (X-coordinates x W-coordinates)
// form: Y with ambient action x |-> coords_X(x) * Y * W_basis.
inline std::vector<Matrix> intertwiner_space(const GModule& M, const SubgroupGroup& C,
                                             const Matrix& X_basis, const Matrix& W_basis) {
  int s = X_basis.rows, h = W_basis.rows;
  std::vector<Matrix> rx, rw;
  for (size_t gi = 0; gi < C.group.gens.size(); ++gi) {
    const Matrix& amb = M.rho[C.to_parent[C.group.gens[gi]]];
    rx.push_back(restrict_to_subspace(amb, X_basis));
    rw.push_back(restrict_to_subspace(amb, W_basis));
  }
  // unknowns Y (s*h), equations RX*Y - Y*RW = 0 per generator
  int unknowns = s * h;
  int eqs = static_cast<int>(rx.size()) * unknowns;
  Matrix sys(unknowns, std::max(eqs, 1), M.p);
  // column-major: equation index e for generator g, entry (i,j):
  for (size_t g = 0; g < rx.size(); ++g) {
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < h; ++j) {
        int eq = static_cast<int>(g) * unknowns + i * h + j;
        // (RX*Y)_{ij} = sum_k RX[i][k] Y[k][j]
        for (int k = 0; k < s; ++k)
          sys.at(k * h + j, eq) = fp_add(sys.at(k * h + j, eq), rx[g].at(i, k), M.p);
        // -(Y*RW)_{ij} = -sum_k Y[i][k] RW[k][j]
        for (int k = 0; k < h; ++k)
          sys.at(i * h + k, eq) = fp_sub(sys.at(i * h + k, eq), rw[g].at(k, j), M.p);
      }
  }
  std::vector<Vec> kernel = solve_homogeneous(sys);
  // canonicalize
  Matrix flat = span_basis(kernel, unknowns, M.p);
  std::vector<Matrix> out;
  for (int r = 0; r < flat.rows; ++r) {
    Matrix y(s, h, M.p);
    y.a = flat.row(r);
    out.push_back(std::move(y));
  }
  return out;
}

// --------------------------------------------------------------------------
// Homogeneous decomposition of V restricted to a p'-subgroup C

struct HomogeneousComponent {
  Matrix basis;           // rows span the component in V
  Matrix isotype_basis;   // rows span one irreducible submodule inside it
  int multiplicity = 0;   // over the endomorphism field E
  int endo_degree = 1;    // [E : F_p]
};

struct HomogeneousDecomposition {
  std::vector<HomogeneousComponent> comps;
};

namespace detail {

// Cyclic C-submodule generated by a vector given in W-coordinates, spun by
// the restricted generator matrices; returns a canonical basis in W-coords.
inline Matrix spin_vector(const Vec& v, const std::vector<Matrix>& gens_restricted, i64 p) {
  int w = static_cast<int>(v.size());
  std::vector<Vec> rows{v};
  Matrix basis = span_basis(rows, w, p);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Matrix& g : gens_restricted) {
      for (int r = 0; r < basis.rows; ++r) {
        Vec img = vec_mat(basis.row(r), g);
        std::vector<Vec> cand;
        for (int i = 0; i < basis.rows; ++i) cand.push_back(basis.row(i));
        cand.push_back(img);
        Matrix bigger = span_basis(cand, w, p);
        if (bigger.rows > basis.rows) {
          basis = bigger;
          grew = true;
        }
      }
    }
  }
  return basis;
}

// Least-dimension cyclic submodule of the restricted action; irreducible
// because the module is semisimple. Enumerates all vectors when feasible,
// otherwise falls back to basis vectors plus seeded random probes.
inline Matrix find_irreducible_submodule(const std::vector<Matrix>& gens_restricted, int dim,
                                         i64 p, uint64_t seed) {
  i64 total = vector_space_size(p, dim);
  Matrix best;
  auto consider = [&](const Vec& v) {
    if (vec_is_zero(v)) return;
    Matrix sub = spin_vector(v, gens_restricted, p);
    if (best.rows == 0 || sub.rows < best.rows) best = sub;
  };
  if (total > 0 && total <= (i64{1} << 16)) {
    for (i64 code = 1; code < total; ++code) {
      consider(decode_vector(code, p, dim));
      if (best.rows == 1) break;
    }
  } else {
    for (int i = 0; i < dim; ++i) {
      Vec v(dim, 0);
      v[i] = 1;
      consider(v);
    }
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 64; ++t) {
      Vec v(dim);
      for (auto& x : v) x = static_cast<i64>(rng() % p);
      consider(v);
    }
  }
  if (best.rows == 0) throw InternalError("no irreducible submodule found in nonzero space");
  return best;
}

}  // namespace detail

inline HomogeneousDecomposition homogeneous_components(const GModule& M, const Subgroup& C,
                                                       uint64_t seed = kDefaultSeed) {
  if (static_cast<i64>(C.elems.size()) % M.p == 0)
    throw HypothesisError("characteristic divides |C|; restriction is not semisimple");
  SubgroupGroup sub = subgroup_as_group(*M.G, C);

  // class sums of C acting on V
  ConjugacyData cls = conjugacy_classes(sub.group);
  std::vector<Matrix> class_sums;
  for (int i = 0; i < cls.k; ++i) {
    Matrix z(M.dim, M.dim, M.p);
    for (int m : cls.members[i]) z = mat_add(z, M.rho[sub.to_parent[m]]);
    class_sums.push_back(std::move(z));
  }
  std::vector<Matrix> gen_mats;
  for (int g : sub.group.gens) gen_mats.push_back(M.rho[sub.to_parent[g]]);

  i64 inv_order = field_inverse(fp_reduce(static_cast<i64>(C.elems.size()), M.p), M.p);
  std::mt19937_64 rng(seed);

  // split a subspace (ambient basis) by one operator's minimal polynomial
  auto try_split = [&](const Matrix& basis, const Matrix& op,
                       std::vector<Matrix>& pieces) -> bool {
    Matrix restricted = restrict_to_subspace(op, basis);
    FpPoly mp = minimal_polynomial(restricted);
    auto factors = poly_factor(mp);
    if (factors.size() < 2) return false;
    for (auto& [f, mult] : factors) {
      // kernel of f(op)^mult on the subspace
      Matrix eval(basis.rows, basis.rows, M.p);
      Matrix power = Matrix::identity(basis.rows, M.p);
      for (int i = 0; i <= f.degree(); ++i) {
        eval = mat_add(eval, mat_scale(power, f.coeff(i)));
        power = mat_mul(power, restricted);
      }
      eval = mat_pow(eval, mult);
      std::vector<Vec> ker = solve_homogeneous(eval);
      std::vector<Vec> ambient;
      for (const Vec& c : ker) ambient.push_back(vec_mat(c, basis));
      pieces.push_back(span_basis(ambient, M.dim, M.p));
    }
    return true;
  };

  std::vector<Matrix> queue{span_basis(
      [&] {
        std::vector<Vec> rows;
        for (int i = 0; i < M.dim; ++i) {
          Vec v(M.dim, 0);
          v[i] = 1;
          rows.push_back(v);
        }
        return rows;
      }(),
      M.dim, M.p)};
  std::vector<HomogeneousComponent> comps;

  while (!queue.empty()) {
    Matrix basis = queue.back();
    queue.pop_back();
    if (basis.rows == 0) continue;

    std::vector<Matrix> pieces;
    bool split = false;
    for (size_t i = 1; i < class_sums.size() && !split; ++i)
      split = try_split(basis, class_sums[i], pieces);
    for (int attempt = 0; attempt < 40 && !split; ++attempt) {
      Matrix combo(M.dim, M.dim, M.p);
      for (size_t i = 1; i < class_sums.size(); ++i)
        combo = mat_add(combo, mat_scale(class_sums[i], static_cast<i64>(rng() % M.p)));
      split = try_split(basis, combo, pieces);
    }
    if (split) {
      for (auto& piece : pieces) queue.push_back(piece);
      continue;
    }

    // candidate homogeneous: identify the isotype and check the arithmetic
    std::vector<Matrix> restricted_gens;
    for (const Matrix& g : gen_mats) restricted_gens.push_back(restrict_to_subspace(g, basis));
    Matrix x_local = detail::find_irreducible_submodule(restricted_gens, basis.rows, M.p, rng());
    std::vector<Vec> x_ambient_rows;
    for (int i = 0; i < x_local.rows; ++i) x_ambient_rows.push_back(vec_mat(x_local.row(i), basis));
    Matrix x_basis = span_basis(x_ambient_rows, M.dim, M.p);

    auto endo = intertwiner_space(M, sub, x_basis, x_basis);
    auto homs = intertwiner_space(M, sub, x_basis, basis);
    int e = static_cast<int>(endo.size());
    if (e == 0) throw InternalError("irreducible submodule with empty endomorphism ring");
    int hom_dim = static_cast<int>(homs.size());
    if (hom_dim % e == 0 && (hom_dim / e) * x_basis.rows == basis.rows) {
      HomogeneousComponent c;
      c.basis = basis;
      c.isotype_basis = x_basis;
      c.multiplicity = hom_dim / e;
      c.endo_degree = e;
      comps.push_back(std::move(c));
      continue;
    }

    // class sums failed to separate two isotypes: split off the homogeneous
    // part of X directly and take a Maschke complement.
    std::vector<Vec> image_rows;
    for (const Matrix& y : homs)
      for (int i = 0; i < y.rows; ++i) {
        // ambient image row: (row i of Y) * basis
        image_rows.push_back(vec_mat(y.row(i), basis));
      }
    Matrix hpart = span_basis(image_rows, M.dim, M.p);
    // build a projection W -> hpart in W-coordinates and average it over C
    Matrix h_local(hpart.rows, basis.rows, M.p);
    for (int i = 0; i < hpart.rows; ++i) h_local.set_row(i, coords_in_basis(basis, hpart.row(i)));
    // extend h_local rows to a basis of W-coordinates
    std::vector<Vec> ext;
    for (int i = 0; i < h_local.rows; ++i) ext.push_back(h_local.row(i));
    for (int i = 0; i < basis.rows && static_cast<int>(ext.size()) < basis.rows; ++i) {
      Vec unit(basis.rows, 0);
      unit[i] = 1;
      ext.push_back(unit);
      if (span_basis(ext, basis.rows, M.p).rows < static_cast<int>(ext.size())) ext.pop_back();
    }
    Matrix full = Matrix::from_rows(ext, M.p);
    Matrix d(basis.rows, basis.rows, M.p);
    for (int i = 0; i < h_local.rows; ++i) d.at(i, i) = 1;
    Matrix proj0 = mat_mul(mat_mul(mat_inverse(full), d), full);
    Matrix proj(basis.rows, basis.rows, M.p);
    for (int c = 0; c < sub.group.n; ++c) {
      Matrix rc = restrict_to_subspace(M.rho[sub.to_parent[c]], basis);
      proj = mat_add(proj, mat_mul(mat_mul(rc, proj0), restrict_to_subspace(M.rho[sub.to_parent[sub.group.inverse(c)]], basis)));
    }
    proj = mat_scale(proj, inv_order);
    std::vector<Vec> comp_local = solve_homogeneous(proj);
    std::vector<Vec> comp_ambient;
    for (const Vec& c : comp_local) comp_ambient.push_back(vec_mat(c, basis));
    queue.push_back(hpart);
    queue.push_back(span_basis(comp_ambient, M.dim, M.p));
  }

  // canonical order, then verify the components really give a direct sum
  std::sort(comps.begin(), comps.end(), [](const HomogeneousComponent& a, const HomogeneousComponent& b) {
    if (a.basis.rows != b.basis.rows) return a.basis.rows < b.basis.rows;
    return a.basis.a < b.basis.a;
  });
  int dim_total = 0;
  std::vector<Vec> all_rows;
  for (const auto& c : comps) {
    dim_total += c.basis.rows;
    for (int i = 0; i < c.basis.rows; ++i) all_rows.push_back(c.basis.row(i));
  }
  if (dim_total != M.dim || span_basis(all_rows, M.dim, M.p).rows != M.dim)
    throw InternalError("homogeneous components do not form a direct sum of V");
  HomogeneousDecomposition out;
  out.comps = std::move(comps);
  return out;
}

// --------------------------------------------------------------------------
// U = Hom_C(X, W) as a module for B = <alpha> over E = End_C(X)

struct UData {
  int m = 0;        // dim_E U = multiplicity of X in W
  int e = 1;        // [E : F_p]
  int dim_fp = 0;   // m * e
  std::vector<Matrix> hom_basis;   // canonical F_p-basis of Hom_C(X, W), in (X x W)-coords
  Matrix alpha_on_U;               // F_p matrix of Y -> Y * RW(alpha) in hom_basis coords
  std::vector<int> partition;      // Jordan block sizes of alpha over E, descending
  i64 alpha_order = 1;             // p^n, the order of alpha on U
  int n_exp = 0;                   // n
  std::vector<Matrix> endo_basis;  // F_p-basis of E (intertwiners X -> X, in X-coords)
  std::vector<int> e_basis;        // indices into hom_basis forming an E-basis of U
  std::vector<std::vector<Vec>> alpha_e;  // alpha_e[i][j]: E-coords of the (i,j) entry
};

inline UData hom_space_module(const GModule& M, const SubgroupGroup& C, const Matrix& X_basis,
                              const Matrix& W_basis, int alpha) {
  UData u;
  u.hom_basis = intertwiner_space(M, C, X_basis, W_basis);
  auto endo = intertwiner_space(M, C, X_basis, X_basis);
  u.e = static_cast<int>(endo.size());
  u.endo_basis = endo;
  u.dim_fp = static_cast<int>(u.hom_basis.size());
  if (u.dim_fp == 0) throw DomainError("component is not homogeneous of the given isotype");
  if (u.dim_fp % u.e != 0 || (u.dim_fp / u.e) * X_basis.rows != W_basis.rows)
    throw DomainError("component is not homogeneous of the given isotype");
  u.m = u.dim_fp / u.e;

  // B must preserve W; alpha acts on Hom by post-composition
  const Matrix& amb_alpha = M.rho[alpha];
  Matrix rw_alpha = restrict_to_subspace(amb_alpha, W_basis);  // throws if W not invariant
  int s = X_basis.rows, h = W_basis.rows;
  Matrix stacked(u.dim_fp, s * h, M.p);
  for (int k = 0; k < u.dim_fp; ++k) stacked.set_row(k, u.hom_basis[k].a);
  u.alpha_on_U = Matrix(u.dim_fp, u.dim_fp, M.p);
  for (int k = 0; k < u.dim_fp; ++k) {
    Matrix img = mat_mul(u.hom_basis[k], rw_alpha);
    u.alpha_on_U.set_row(k, coords_in_basis(stacked, img.a));
  }

  u.partition = unipotent_partition_over_unit(u.alpha_on_U, M.p, u.e);
  u.alpha_order = u.dim_fp == 0 ? 1 : mat_order(u.alpha_on_U);
  u.n_exp = 0;
  i64 o = u.alpha_order;
  while (o > 1) {
    if (o % M.p != 0) throw InternalError("alpha acts with order not a power of p");
    o /= M.p;
    ++u.n_exp;
  }

  // greedy E-basis of U
  std::vector<Vec> span_rows;
  Matrix span(0, s * h, M.p);
  for (int k = 0; k < u.dim_fp && static_cast<int>(u.e_basis.size()) < u.m; ++k) {
    std::vector<Vec> cand = span_rows;
    cand.push_back(u.hom_basis[k].a);
    if (span_basis(cand, s * h, M.p).rows == static_cast<int>(cand.size())) {
      u.e_basis.push_back(k);
      for (const Matrix& eps : u.endo_basis)
        span_rows.push_back(mat_mul(eps, u.hom_basis[k]).a);
      Matrix chk = span_basis(span_rows, s * h, M.p);
      if (chk.rows != static_cast<int>(span_rows.size()))
        throw InternalError("E-orbits of hom basis elements are not independent");
    }
  }
  if (static_cast<int>(u.e_basis.size()) != u.m)
    throw InternalError("failed to extract an E-basis of the Hom space");

  // alpha over E: Y_j * RW(alpha) = sum_i eps(c_ij) * Y_i
  Matrix e_stacked(u.m * u.e, s * h, M.p);
  for (int i = 0; i < u.m; ++i)
    for (int l = 0; l < u.e; ++l)
      e_stacked.set_row(i * u.e + l, mat_mul(u.endo_basis[l], u.hom_basis[u.e_basis[i]]).a);
  u.alpha_e.assign(u.m, std::vector<Vec>(u.m));
  for (int j = 0; j < u.m; ++j) {
    Matrix img = mat_mul(u.hom_basis[u.e_basis[j]], rw_alpha);
    Vec coords = coords_in_basis(e_stacked, img.a);
    for (int i = 0; i < u.m; ++i)
      u.alpha_e[i][j] = Vec(coords.begin() + i * u.e, coords.begin() + (i + 1) * u.e);
  }
  return u;
}

// --------------------------------------------------------------------------
// Tensor reassembly X (x)_E U -> W

struct TensorAssembly {
  GModule mod;        // module of the acting subgroup on X (x)_E U
  Matrix evaluation;  // (dimX*m) x dimV, bijective onto W, intertwines the action
};

inline TensorAssembly tensor_assemble(const GModule& M, const SubgroupGroup& BC,
                                      const Matrix& X_basis, const Matrix& W_basis,
                                      const UData& u, int alpha_parent,
                                      const std::vector<int>& c_parent_gens) {
  int s = X_basis.rows, mm = u.m;
  int dim_xu = s * mm;
  auto eps_of = [&](const Vec& coords) {
    Matrix eps(s, s, M.p);
    for (int l = 0; l < u.e; ++l) eps = mat_add(eps, mat_scale(u.endo_basis[l], coords[l]));
    return eps;
  };

  TensorAssembly out;
  out.evaluation = Matrix(dim_xu, M.dim, M.p);
  for (int a = 0; a < s; ++a)
    for (int j = 0; j < mm; ++j) {
      // evaluation of (a-th X basis vector) (x) Y_{e_basis[j]}
      Vec wcoords = u.hom_basis[u.e_basis[j]].row(a);
      out.evaluation.set_row(a * mm + j, vec_mat(wcoords, W_basis));
    }
  if (mat_rank(out.evaluation) != dim_xu)
    throw InternalError("evaluation map is not bijective onto the component");

  // per-generator matrices for the acting subgroup's generator list
  std::vector<Matrix> gen_mats;
  for (int gi : BC.group.gens) {
    int parent = BC.to_parent[gi];
    Matrix t(dim_xu, dim_xu, M.p);
    if (parent == alpha_parent) {
      for (int a = 0; a < s; ++a)
        for (int j = 0; j < mm; ++j)
          for (int i = 0; i < mm; ++i) {
            Matrix eps = eps_of(u.alpha_e[i][j]);
            for (int a2 = 0; a2 < s; ++a2)
              t.at(a * mm + j, a2 * mm + i) =
                  fp_add(t.at(a * mm + j, a2 * mm + i), eps.at(a, a2), M.p);
          }
    } else if (std::find(c_parent_gens.begin(), c_parent_gens.end(), parent) != c_parent_gens.end()) {
      Matrix rx = restrict_to_subspace(M.rho[parent], X_basis);
      t = kronecker(rx, Matrix::identity(mm, M.p));
    } else {
      throw DomainError("acting subgroup generator is neither alpha nor a C-generator");
    }
    gen_mats.push_back(std::move(t));
  }
  out.mod = module_from_generators(BC.group, gen_mats, M.p);

  // the evaluation must intertwine every generator
  for (size_t gi = 0; gi < BC.group.gens.size(); ++gi) {
    int parent = BC.to_parent[BC.group.gens[gi]];
    Matrix lhs = mat_mul(out.mod.rho[BC.group.gens[gi]], out.evaluation);
    Matrix rhs = mat_mul(out.evaluation, M.rho[parent]);
    if (!(lhs == rhs)) throw InternalError("evaluation map does not intertwine the action");
  }
  return out;
}

// --------------------------------------------------------------------------
// Induced action on an elementary abelian section R / Phi

struct SectionModule {
  SubgroupGroup acting;
  GModule mod;
  std::vector<int> basis_parent;  // parent (GA) elements lifting the Q-basis
};

inline SectionModule section_action(const FiniteGroup& GA, const Subgroup& R, const Subgroup& Phi,
                                    const Subgroup& acting, i64 r) {
  SubgroupGroup subR = subgroup_as_group(GA, R);
  // Phi inside subR
  std::vector<int> pos(GA.n, -1);
  for (size_t i = 0; i < subR.to_parent.size(); ++i) pos[subR.to_parent[i]] = static_cast<int>(i);
  Subgroup phi_local;
  phi_local.G = &subR.group;
  for (int g : Phi.elems) {
    if (pos[g] < 0) throw DomainError("Phi is not contained in R");
    phi_local.elems.push_back(pos[g]);
  }
  std::sort(phi_local.elems.begin(), phi_local.elems.end());
  QuotientGroup Q = quotient_group(subR.group, phi_local);

  // Q must be elementary abelian of exponent r
  i64 qn = Q.group.n;
  int rank = 0;
  while (qn > 1) {
    if (qn % r != 0) throw HypothesisError("section is not an r-group");
    qn /= r;
    ++rank;
  }
  if (derived_subgroup(Q.group).order() != 1 || (Q.group.n > 1 && exponent_of(Q.group) != r))
    throw HypothesisError("section is not elementary abelian of exponent r");

  // greedy basis of Q
  std::vector<int> basis;
  Subgroup have = trivial_subgroup(Q.group);
  for (int q = 1; q < Q.group.n && static_cast<int>(basis.size()) < rank; ++q) {
    if (have.contains(q)) continue;
    basis.push_back(q);
    have = subgroup_closure(Q.group, basis);
  }
  if (static_cast<int>(basis.size()) != rank) throw InternalError("could not find a basis of the section");

  // coordinates of every Q element
  std::map<int, Vec> coords;
  i64 total = 1;
  for (int i = 0; i < rank; ++i) total *= r;
  for (i64 code = 0; code < total; ++code) {
    Vec v = decode_vector(code, r, rank);
    int elem = 0;
    for (int i = 0; i < rank; ++i) elem = Q.group.mul(elem, Q.group.power(basis[i], v[i]));
    if (!coords.count(elem)) coords[elem] = v;
  }
  if (static_cast<int>(coords.size()) != Q.group.n)
    throw InternalError("section coordinates do not cover the quotient");

  SectionModule out;
  out.acting = subgroup_as_group(GA, acting);
  for (int b : basis) out.basis_parent.push_back(subR.to_parent[Q.coset_rep[b]]);

  std::vector<Matrix> gen_mats;
  for (int gi : out.acting.group.gens) {
    int g = out.acting.to_parent[gi];
    Matrix m(rank, rank, r);
    for (int i = 0; i < rank; ++i) {
      int lift = out.basis_parent[i];
      int conj = GA.conjugate(lift, g);
      if (pos[conj] < 0) throw DomainError("acting subgroup does not normalize R");
      m.set_row(i, coords.at(Q.proj[pos[conj]]));
    }
    gen_mats.push_back(std::move(m));
  }
  out.mod = module_from_generators(out.acting.group, gen_mats, r, rank);
  return out;
}

}  // namespace regorb
