#include "nangle/engine.hpp"

#include <optional>

#include "nangle/io.hpp"
#include "nangle/mapsystem.hpp"

namespace nangle {

namespace {

GradedMap grid_map(Fp fp, const std::vector<GradedObject>& tgts,
                   const std::vector<GradedObject>& srcs,
                   const std::vector<std::vector<std::optional<GradedMap>>>& cells) {
  std::vector<std::vector<const GradedMap*>> grid(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = 0; j < cells[i].size(); ++j)
      grid[i].push_back(cells[i][j] ? &*cells[i][j] : nullptr);
  return block_map(fp, tgts, srcs, grid);
}

void check_completion_inputs(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                             const GradedMap& phi2) {
  if (s.n != t.n || s.shift != t.shift || !(s.fp == t.fp))
    throw ShapeError("completion: rows have different shape parameters");
  if (!(phi1.src() == s.obj(0)) || !(phi1.tgt() == t.obj(0)))
    throw ShapeError("completion: phi1 endpoints mismatch");
  if (!(phi2.src() == s.obj(1)) || !(phi2.tgt() == t.obj(1)))
    throw ShapeError("completion: phi2 endpoints mismatch");
  if (!(compose(phi2, s.map(0)) == compose(t.map(0), phi1)))
    throw CompletionError("first square of the completion input does not commute", 0,
                          to_text(s) + to_text(t));
}

// Joint system for the unknown components φ_2..φ_{n-1} (0-based).
MapSystem::Solution completion_solution(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                                        const GradedMap& phi2) {
  int n = s.n;
  Fp fp = s.fp;
  MapSystem sys(fp);
  std::vector<int> u(static_cast<std::size_t>(n), -1);
  for (int i = 2; i < n; ++i) u[static_cast<std::size_t>(i)] = sys.add_unknown(s.obj(i), t.obj(i));

  for (int i = 1; i < n; ++i) {
    GradedMap zero = GradedMap::zero(fp, s.obj(i), t.map_target(i));
    std::vector<MapSystem::Term> terms;
    GradedMap rhs = zero;
    // square i: φ_{i+1} ∘ α_i = β_i ∘ φ_i, with φ_n+1-slot = Σ^k φ_0.
    if (i + 1 < n)
      terms.push_back({u[static_cast<std::size_t>(i) + 1], GradedMap::identity(fp, t.obj(i + 1)),
                       s.map(i), 0});
    else
      rhs = add(rhs, compose(shift_map(phi1, s.shift), s.map(i)));
    if (i >= 2)
      terms.push_back({u[static_cast<std::size_t>(i)], negated(t.map(i)),
                       GradedMap::identity(fp, s.obj(i)), 0});
    else
      rhs = add(rhs, negated(compose(t.map(i), phi2)));
    // Move the known parts across: Σ L∘U∘R = -rhs_known.
    sys.require(terms, negated(rhs));
  }
  auto sol = sys.solve();
  if (!sol)
    throw CompletionError("completion system is inconsistent (rows are not both n-angles?)", -1,
                          to_text(s) + to_text(t));
  return *sol;
}

SeqMorphism assemble_completion(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                                const GradedMap& phi2, const std::vector<GradedMap>& tail) {
  std::vector<GradedMap> comps;
  comps.push_back(phi1);
  comps.push_back(phi2);
  for (auto& m : tail) comps.push_back(m);
  return make_morphism(s, t, comps);
}

}  // namespace

SeqMorphism complete_to_morphism(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                                 const GradedMap& phi2) {
  check_completion_inputs(s, t, phi1, phi2);
  auto sol = completion_solution(s, t, phi1, phi2);
  SeqMorphism m = assemble_completion(s, t, phi1, phi2, sol.particular);
  if (!is_morphism(m))
    throw CompletionError("completion verification", first_violated_square(m), to_text(m));
  return m;
}

ConeCompletion cone_completion(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                               const GradedMap& phi2, const EngineOptions& opts) {
  if (!is_exact(s))
    throw CompletionError("cone completion precondition: first row not exact",
                          first_inexact_position(s), to_text(s));
  if (!is_exact(t))
    throw CompletionError("cone completion precondition: second row not exact",
                          first_inexact_position(t), to_text(t));
  SeqMorphism m = complete_to_morphism(s, t, phi1, phi2);
  NSeq cone = mapping_cone(m);
  if (is_exact(cone)) return {std::move(m), std::move(cone)};

  // The canonical completion failed the cone check. That cannot happen over
  // the semisimple model; search the completion space so other models can be
  // probed, and report honestly either way.
  auto sol = completion_solution(s, t, phi1, phi2);
  std::optional<ConeCompletion> found;
  bool exhausted = false;
  enumerate_solutions(sol, opts.search_budget,
                      [&](const std::vector<GradedMap>& tail) {
                        SeqMorphism cand = assemble_completion(s, t, phi1, phi2, tail);
                        if (!is_morphism(cand)) return false;
                        NSeq c = mapping_cone(cand);
                        if (!is_exact(c)) return false;
                        found = ConeCompletion{std::move(cand), std::move(c)};
                        return true;
                      },
                      &exhausted);
  if (found) return std::move(*found);
  if (!exhausted)
    throw BudgetError("cone completion: search budget exceeded before exhausting the space");
  throw CompletionError("no completion has an exact mapping cone",
                        first_inexact_position(cone), to_text(m));
}

Ladder make_ladder(int n, int shift, Fp fp, std::vector<GradedObject> a_objs,
                   std::vector<GradedMap> a_maps, std::vector<GradedObject> b_objs,
                   std::vector<GradedMap> b_maps, std::vector<GradedMap> verticals) {
  if (n < 3) throw ShapeError("ladder needs n >= 3");
  std::size_t len = static_cast<std::size_t>(n) - 1;
  if (a_objs.size() != len || b_objs.size() != len || a_maps.size() != len - 1 ||
      b_maps.size() != len - 1 || verticals.size() != len)
    throw ShapeError("ladder component counts do not match n");
  Ladder lad{n,
             shift,
             fp,
             std::move(a_objs),
             std::move(b_objs),
             std::move(a_maps),
             std::move(b_maps),
             std::move(verticals)};
  for (std::size_t i = 0; i + 1 < len; ++i) {
    if (!(lad.a_maps[i].src() == lad.a_objs[i]) || !(lad.a_maps[i].tgt() == lad.a_objs[i + 1]))
      throw ShapeError("ladder: top chain map endpoints mismatch");
    if (!(lad.b_maps[i].src() == lad.b_objs[i]) || !(lad.b_maps[i].tgt() == lad.b_objs[i + 1]))
      throw ShapeError("ladder: bottom chain map endpoints mismatch");
  }
  for (std::size_t i = 0; i < len; ++i)
    if (!(lad.verticals[i].src() == lad.a_objs[i]) || !(lad.verticals[i].tgt() == lad.b_objs[i]))
      throw ShapeError("ladder: vertical map endpoints mismatch");
  return lad;
}

namespace {

// Objects and all maps except the final connecting one.
void ladder_prefix(const Ladder& lad, std::vector<GradedObject>& objects,
                   std::vector<GradedMap>& maps) {
  Fp fp = lad.fp;
  int n = lad.n;
  objects.clear();
  maps.clear();
  objects.push_back(lad.a_objs[0]);
  for (int i = 1; i <= n - 2; ++i)
    objects.push_back(direct_sum(lad.a_objs[static_cast<std::size_t>(i)],
                                 lad.b_objs[static_cast<std::size_t>(i) - 1]));
  objects.push_back(lad.b_objs[static_cast<std::size_t>(n) - 2]);

  {
    std::vector<std::vector<std::optional<GradedMap>>> cells(2);
    cells[0] = {negated(lad.a_maps[0])};
    cells[1] = {lad.verticals[0]};
    maps.push_back(grid_map(fp, {lad.a_objs[1], lad.b_objs[0]}, {lad.a_objs[0]}, cells));
  }
  for (int i = 1; i <= n - 3; ++i) {
    std::vector<std::vector<std::optional<GradedMap>>> cells(2);
    cells[0] = {lad.a_maps[static_cast<std::size_t>(i)], std::nullopt};
    cells[1] = {scaled(lad.verticals[static_cast<std::size_t>(i)], fp.sign(i + 1)),
                lad.b_maps[static_cast<std::size_t>(i) - 1]};
    maps.push_back(grid_map(fp,
                            {lad.a_objs[static_cast<std::size_t>(i) + 1],
                             lad.b_objs[static_cast<std::size_t>(i)]},
                            {lad.a_objs[static_cast<std::size_t>(i)],
                             lad.b_objs[static_cast<std::size_t>(i) - 1]},
                            cells));
  }
  {
    std::size_t last = static_cast<std::size_t>(n) - 2;
    std::vector<std::vector<std::optional<GradedMap>>> cells(1);
    cells[0] = {scaled(lad.verticals[last], fp.sign(n - 1)), lad.b_maps[last - 1]};
    maps.push_back(grid_map(fp, {lad.b_objs[last]}, {lad.a_objs[last], lad.b_objs[last - 1]},
                            cells));
  }
}

}  // namespace

NSeq ladder_candidate(const Ladder& lad, const GradedMap& partial) {
  std::vector<GradedObject> objects;
  std::vector<GradedMap> maps;
  ladder_prefix(lad, objects, maps);
  maps.push_back(partial);
  return make_nseq(lad.n, lad.shift, lad.fp, std::move(objects), std::move(maps));
}

NSeq reduced_cone(const SeqMorphism& m) {
  const NSeq& s = m.source;
  const NSeq& t = m.target;
  int n = s.n;
  if (!(s.obj(0) == t.obj(0)) || !(m.components[0] == GradedMap::identity(s.fp, s.obj(0))))
    throw CompletionError("reduced cone precondition: first component must be the identity", 0,
                          to_text(m));
  if (!is_morphism(m))
    throw CompletionError("reduced cone precondition: not a morphism", first_violated_square(m),
                          to_text(m));
  NSeq cone = mapping_cone(m);
  if (!is_exact(cone))
    throw CompletionError("reduced cone precondition: mapping cone not exact",
                          first_inexact_position(cone), to_text(m));

  std::vector<GradedObject> a_objs(s.objects.begin() + 1, s.objects.end());
  std::vector<GradedMap> a_maps(s.maps.begin() + 1, s.maps.end() - 1);
  std::vector<GradedObject> b_objs(t.objects.begin() + 1, t.objects.end());
  std::vector<GradedMap> b_maps(t.maps.begin() + 1, t.maps.end() - 1);
  std::vector<GradedMap> verts(m.components.begin() + 1, m.components.end());
  Ladder lad = make_ladder(n, s.shift, s.fp, std::move(a_objs), std::move(a_maps),
                           std::move(b_objs), std::move(b_maps), std::move(verts));
  GradedMap partial = compose(shift_map(s.map(0), s.shift), t.map(n - 1));
  NSeq out = ladder_candidate(lad, partial);
  if (!is_exact(out))
    throw CompletionError("reduced cone failed exactness", first_inexact_position(out),
                          to_text(out));
  return out;
}

std::optional<HomotopyCartesianWitness> homotopy_cartesian(const Ladder& lad,
                                                           const EngineOptions& opts) {
  for (std::size_t i = 0; i + 1 < lad.verticals.size(); ++i)
    if (!(compose(lad.verticals[i + 1], lad.a_maps[i]) == compose(lad.b_maps[i], lad.verticals[i])))
      throw ShapeError("homotopy_cartesian: ladder square " + std::to_string(i) +
                       " does not commute");

  std::vector<GradedObject> objects;
  std::vector<GradedMap> maps;
  ladder_prefix(lad, objects, maps);
  Fp fp = lad.fp;
  int n = lad.n;
  GradedObject wrap = shift_object(lad.a_objs[0], lad.shift);
  const GradedObject& src = lad.b_objs.back();

  // Exactness away from the connecting map does not involve ∂ at all, so a
  // failure there rules out every candidate.
  for (int i = 1; i <= n - 2; ++i) {
    const GradedMap& in = maps[static_cast<std::size_t>(i) - 1];
    const GradedMap& out = maps[static_cast<std::size_t>(i)];
    if (!compose(out, in).is_zero()) return std::nullopt;
    for (auto& [d, dim] : objects[static_cast<std::size_t>(i)].dims())
      if (in.block(d).rank() + out.block(d).rank() != static_cast<std::size_t>(dim))
        return std::nullopt;
  }

  // An exact candidate forces ker ∂ = im(incoming) and im ∂ = Σ^k ker(first),
  // so ∂ exists iff the complement of the incoming image matches the shifted
  // kernel degreewise; build the canonical one from row-reduction bases.
  {
    GradedMap partial(fp, src, wrap);
    bool feasible = true;
    // Degrees the connecting map cannot reach must carry no kernel.
    for (auto& [d, dim] : wrap.dims()) {
      (void)dim;
      if (src.dim(d) == 0 &&
          maps.front().block(d - lad.shift).kernel_basis().cols() != 0)
        return std::nullopt;
    }
    for (auto& [d, dim] : src.dims()) {
      Matrix im = maps.back().block(d).image_basis();
      Matrix comp = extend_to_basis(im);
      Matrix ker = maps.front().block(d - lad.shift).kernel_basis();
      std::size_t wrap_dim = static_cast<std::size_t>(wrap.dim(d));
      if (comp.cols() != ker.cols()) {
        feasible = false;
        break;
      }
      if (wrap_dim == 0) continue;
      Matrix basis = im.hstack(comp);
      auto binv = basis.inverse();
      if (!binv) {
        feasible = false;  // defensive; [im | comp] is a basis by construction
        break;
      }
      Matrix lift = Matrix::zero(fp, wrap_dim, im.cols()).hstack(ker);
      partial.set_block(d, lift * *binv);
      (void)dim;
    }
    if (feasible) {
      NSeq angle = ladder_candidate(lad, partial);
      if (is_exact(angle)) return HomotopyCartesianWitness{std::move(partial), std::move(angle)};
    } else {
      return std::nullopt;
    }
  }

  // The direct construction is complete, but keep the budgeted search over
  // the composite-constraint space as a fallback path.
  MapSystem sys(fp);
  int u = sys.add_unknown(src, wrap);
  sys.require({{u, GradedMap::identity(fp, wrap), maps.back(), 0}},
              GradedMap::zero(fp, objects[objects.size() - 2], wrap));
  sys.require({{u, shift_map(maps.front(), lad.shift), GradedMap::identity(fp, src), 0}},
              GradedMap::zero(fp, src, shift_object(objects[1], lad.shift)));
  auto sol = sys.solve();
  if (!sol) return std::nullopt;

  std::optional<HomotopyCartesianWitness> found;
  bool exhausted = false;
  enumerate_solutions(*sol, opts.search_budget,
                      [&](const std::vector<GradedMap>& cand) {
                        NSeq angle = ladder_candidate(lad, cand[0]);
                        if (!is_exact(angle)) return false;
                        found = HomotopyCartesianWitness{cand[0], std::move(angle)};
                        return true;
                      },
                      &exhausted);
  if (found) return found;
  if (!exhausted)
    throw BudgetError("homotopy_cartesian: search budget exceeded before exhausting the space");
  return std::nullopt;
}

OctaData higher_octahedron(const NSeq& a_seq, const NSeq& b_seq, const NSeq& c_seq,
                           const GradedMap& phi2, const EngineOptions& opts) {
  int n = a_seq.n;
  int k = a_seq.shift;
  Fp fp = a_seq.fp;
  if (b_seq.n != n || c_seq.n != n || b_seq.shift != k || c_seq.shift != k)
    throw ShapeError("octahedron: rows have different shape parameters");
  if (!(a_seq.obj(0) == b_seq.obj(0)))
    throw ShapeError("octahedron: first two rows must share their first object");
  if (!(c_seq.obj(0) == a_seq.obj(1)) || !(c_seq.obj(1) == b_seq.obj(1)))
    throw ShapeError("octahedron: third row must run from A_2 through B_2");
  if (!(c_seq.map(0) == phi2))
    throw ShapeError("octahedron: third row must start with phi2");
  if (!(compose(phi2, a_seq.map(0)) == b_seq.map(0)))
    throw CompletionError("octahedron input square does not commute", 0,
                          to_text(a_seq) + to_text(b_seq));
  for (auto* row : {&a_seq, &b_seq, &c_seq})
    if (!is_exact(*row))
      throw CompletionError("octahedron precondition: input row not exact",
                            first_inexact_position(*row), to_text(*row));

  ConeCompletion cc1 =
      cone_completion(a_seq, b_seq, GradedMap::identity(fp, a_seq.obj(0)), phi2, opts);
  NSeq reduced = reduced_cone(cc1.morphism);
  GradedMap proj2 = projection(fp, {a_seq.obj(2), b_seq.obj(1)}, 1);
  ConeCompletion cc2 =
      cone_completion(reduced, c_seq, GradedMap::identity(fp, reduced.obj(0)), proj2, opts);

  // Read the ψ's off the components of the second completion.
  std::vector<GradedMap> psis(static_cast<std::size_t>(2 * n - 5),
                              GradedMap::zero(fp, GradedObject(), GradedObject()));
  for (int i = 2; i <= n - 2; ++i) {
    std::vector<GradedObject> parts{a_seq.obj(i + 1), b_seq.obj(i)};
    const GradedMap& comp = cc2.morphism.components[static_cast<std::size_t>(i)];
    psis[static_cast<std::size_t>(2 * i - 2) - 1] = compose(comp, inclusion(fp, parts, 0));
    psis[static_cast<std::size_t>(2 * i - 3) - 1] = compose(comp, inclusion(fp, parts, 1));
  }
  psis[static_cast<std::size_t>(2 * n - 5) - 1] =
      cc2.morphism.components[static_cast<std::size_t>(n) - 1];

  std::vector<GradedMap> phis(cc1.morphism.components.begin() + 2, cc1.morphism.components.end());

  // Γ, assembled from the displayed block pattern; out-of-range slots are
  // zero objects and drop out as zero-width blocks.
  auto aa = [&](int q) { return q >= 1 && q <= n ? a_seq.obj(q - 1) : GradedObject(); };
  auto bb = [&](int q) { return q >= 1 && q <= n ? b_seq.obj(q - 1) : GradedObject(); };
  auto cc = [&](int q) { return q >= 3 && q <= n ? c_seq.obj(q - 1) : GradedObject(); };
  auto psi_at = [&](int j) -> std::optional<GradedMap> {
    if (j >= 1 && j <= 2 * n - 5) return psis[static_cast<std::size_t>(j) - 1];
    return std::nullopt;
  };

  std::vector<GradedObject> gobjs;
  gobjs.push_back(aa(3));
  for (int q = 2; q <= n; ++q)
    gobjs.push_back(direct_sum(aa(q + 2), direct_sum(bb(q + 1), cc(q))));

  std::vector<GradedMap> gmaps;
  {
    std::vector<std::vector<std::optional<GradedMap>>> cells(3);
    cells[0] = {n >= 4 ? std::optional<GradedMap>(a_seq.map(2)) : std::nullopt};
    cells[1] = {phis[0]};
    cells[2] = {std::nullopt};
    gmaps.push_back(grid_map(fp, {aa(4), bb(3), cc(2)}, {aa(3)}, cells));
  }
  for (int q = 2; q <= n - 1; ++q) {
    std::vector<std::vector<std::optional<GradedMap>>> cells(
        3, std::vector<std::optional<GradedMap>>(3, std::nullopt));
    if (q <= n - 3) cells[0][0] = negated(a_seq.map(q + 1));
    if (q + 2 <= n) cells[1][0] = scaled(phis[static_cast<std::size_t>(q) - 1], fp.sign(q));
    if (q + 1 <= n - 1) cells[1][1] = negated(b_seq.map(q));
    cells[2][0] = psi_at(2 * q - 2);
    cells[2][1] = psi_at(2 * q - 3);
    if (q >= 3) cells[2][2] = c_seq.map(q - 1);
    gmaps.push_back(grid_map(fp, {aa(q + 3), bb(q + 2), cc(q + 1)},
                             {aa(q + 2), bb(q + 1), cc(q)}, cells));
  }
  gmaps.push_back(compose(shift_map(a_seq.map(1), k), c_seq.map(n - 1)));
  NSeq gamma = make_nseq(n, k, fp, std::move(gobjs), std::move(gmaps));

  if (!is_exact(gamma))
    throw CompletionError("octahedron output: produced n-angle not exact",
                          first_inexact_position(gamma), to_text(gamma));
  GradedMap lhs = compose(c_seq.map(n - 1), psis[static_cast<std::size_t>(2 * n - 5) - 1]);
  GradedMap rhs = compose(shift_map(a_seq.map(0), k), b_seq.map(n - 1));
  if (!(lhs == rhs))
    throw CompletionError("octahedron output: γ_n ∘ ψ_{2n-5} differs from Σα_1 ∘ β_n", n,
                          to_text(a_seq) + to_text(b_seq) + to_text(c_seq));
  return OctaData{std::move(phis), std::move(psis), std::move(gamma), std::move(cc1.morphism)};
}

OctaData tr4_octahedron(const NSeq& a_tri, const NSeq& b_tri, const NSeq& c_tri,
                        const GradedMap& phi2, const EngineOptions& opts) {
  if (a_tri.n != 3) throw ShapeError("tr4_octahedron expects triangles (n = 3)");
  OctaData octa = higher_octahedron(a_tri, b_tri, c_tri, phi2, opts);
  // The Θ square: ψ_1 ∘ β_2 = γ_2.
  if (!(compose(octa.psis[0], b_tri.map(1)) == c_tri.map(1)))
    throw CompletionError("TR4 theta square does not commute", 1,
                          to_text(a_tri) + to_text(b_tri) + to_text(c_tri));
  return octa;
}

ConeCompletion n4_from_n4star(const NSeq& s, const NSeq& t, const GradedMap& phi1,
                              const GradedMap& phi2, const EngineOptions& opts) {
  check_completion_inputs(s, t, phi1, phi2);
  int n = s.n;
  int k = s.shift;
  Fp fp = s.fp;
  if (!is_exact(s) || !is_exact(t))
    throw CompletionError("octahedral cone completion: input rows must be exact",
                          is_exact(s) ? first_inexact_position(t) : first_inexact_position(s),
                          to_text(s) + to_text(t));

  const GradedObject& s0 = s.obj(0);
  const GradedObject& s1 = s.obj(1);
  const GradedObject& t0 = t.obj(0);
  const GradedObject& t1 = t.obj(1);
  GradedObject shift_s0 = shift_object(s0, k);
  GradedObject shift_s1 = shift_object(s1, k);
  GradedObject shift_t0 = shift_object(t0, k);
  std::vector<GradedObject> head_parts{t1, s1, t0};

  // First auxiliary row: A_1⊕B_1 -> B_2⊕A_2⊕B_1 -> A_3⊕B_2 -> A_4 -> ... -> A_n -> Σ(A_1⊕B_1).
  NSeq why;
  {
    std::vector<GradedObject> objs;
    objs.push_back(direct_sum(s0, t0));
    objs.push_back(direct_sum(t1, direct_sum(s1, t0)));
    objs.push_back(direct_sum(s.obj(2), t1));
    for (int i = 3; i < n; ++i) objs.push_back(s.obj(i));
    std::vector<GradedMap> maps;
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(3,
          std::vector<std::optional<GradedMap>>(2, std::nullopt));
      cells[1][0] = scaled(s.map(0), fp.sign(n));
      cells[2][1] = negated(GradedMap::identity(fp, t0));
      maps.push_back(grid_map(fp, head_parts, {s0, t0}, cells));
    }
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(2,
          std::vector<std::optional<GradedMap>>(3, std::nullopt));
      cells[0][1] = negated(s.map(1));
      cells[1][0] = GradedMap::identity(fp, t1);
      maps.push_back(grid_map(fp, {s.obj(2), t1}, head_parts, cells));
    }
    if (n == 3) {
      std::vector<std::vector<std::optional<GradedMap>>> cells(2,
          std::vector<std::optional<GradedMap>>(2, std::nullopt));
      cells[0][0] = scaled(s.map(2), fp.sign(3));
      maps.push_back(grid_map(fp, {shift_s0, shift_object(t0, k)}, {s.obj(2), t1}, cells));
    } else {
      {
        std::vector<std::vector<std::optional<GradedMap>>> cells(1);
        cells[0] = {negated(s.map(2)), std::nullopt};
        maps.push_back(grid_map(fp, {s.obj(3)}, {s.obj(2), t1}, cells));
      }
      for (int i = 3; i < n - 1; ++i) maps.push_back(s.map(i));
      {
        std::vector<std::vector<std::optional<GradedMap>>> cells(2);
        cells[0] = {scaled(s.map(n - 1), fp.sign(n))};
        cells[1] = {std::nullopt};
        maps.push_back(grid_map(fp, {shift_s0, shift_t0}, {s.obj(n - 1)}, cells));
      }
    }
    why = make_nseq(n, k, fp, std::move(objs), std::move(maps));
  }

  // Second auxiliary row: A_1⊕B_1 -> B_2 -> B_3 -> ... -> B_{n-1} -> ΣA_1⊕B_n -> Σ(A_1⊕B_1).
  NSeq zed;
  {
    std::vector<GradedObject> objs;
    objs.push_back(direct_sum(s0, t0));
    for (int i = 1; i <= n - 2; ++i) objs.push_back(t.obj(i));
    objs.push_back(direct_sum(shift_s0, t.obj(n - 1)));
    std::vector<GradedMap> maps;
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(1);
      cells[0] = {scaled(compose(phi2, s.map(0)), fp.sign(n + 1)), t.map(0)};
      maps.push_back(grid_map(fp, {t1}, {s0, t0}, cells));
    }
    for (int i = 1; i <= n - 3; ++i)
      maps.push_back(i == 1 ? t.map(1) : negated(t.map(i)));
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(2);
      cells[0] = {std::nullopt};
      cells[1] = {negated(t.map(n - 2))};
      maps.push_back(grid_map(fp, {shift_s0, t.obj(n - 1)}, {t.obj(n - 2)}, cells));
    }
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(2,
          std::vector<std::optional<GradedMap>>(2, std::nullopt));
      cells[0][0] = negated(GradedMap::identity(fp, shift_s0));
      cells[1][0] = scaled(shift_map(phi1, k), fp.sign(n + 1));
      cells[1][1] = scaled(t.map(n - 1), fp.sign(n + 1));
      maps.push_back(grid_map(fp, {shift_s0, shift_t0}, {shift_s0, t.obj(n - 1)}, cells));
    }
    zed = make_nseq(n, k, fp, std::move(objs), std::move(maps));
  }

  // Third row: B_2⊕A_2⊕B_1 -> B_2 -> 0 -> ... -> 0 -> ΣA_2⊕ΣB_1 -> Σ(B_2⊕A_2⊕B_1).
  NSeq ex;
  GradedMap x_first(fp, GradedObject(), GradedObject());
  {
    std::vector<GradedObject> objs;
    objs.push_back(why.obj(1));
    objs.push_back(t1);
    for (int i = 2; i <= n - 2; ++i) objs.push_back(GradedObject());
    objs.push_back(direct_sum(shift_s1, shift_t0));
    std::vector<GradedMap> maps;
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(1);
      cells[0] = {GradedMap::identity(fp, t1), negated(phi2), negated(t.map(0))};
      maps.push_back(grid_map(fp, {t1}, head_parts, cells));
    }
    for (int i = 1; i <= n - 2; ++i)
      maps.push_back(GradedMap::zero(fp, objs[static_cast<std::size_t>(i)],
                                     objs[static_cast<std::size_t>(i) + 1]));
    {
      std::vector<std::vector<std::optional<GradedMap>>> cells(3,
          std::vector<std::optional<GradedMap>>(2, std::nullopt));
      cells[0][0] = scaled(shift_map(phi2, k), fp.sign(n));
      cells[0][1] = scaled(shift_map(t.map(0), k), fp.sign(n));
      cells[1][0] = scaled(GradedMap::identity(fp, shift_s1), fp.sign(n));
      cells[2][1] = scaled(GradedMap::identity(fp, shift_t0), fp.sign(n));
      maps.push_back(grid_map(fp,
                              {shift_object(t1, k), shift_s1, shift_t0},
                              {shift_s1, shift_t0}, cells));
    }
    ex = make_nseq(n, k, fp, std::move(objs), std::move(maps));
    x_first = ex.map(0);
  }

  const char* names[3] = {"first auxiliary row", "second auxiliary row", "third auxiliary row"};
  const NSeq* rows[3] = {&why, &zed, &ex};
  for (int r = 0; r < 3; ++r)
    if (!is_exact(*rows[r]))
      throw CompletionError(std::string("octahedral cone completion: ") + names[r] + " not exact",
                            first_inexact_position(*rows[r]), to_text(*rows[r]));

  OctaData octa = higher_octahedron(why, zed, ex, x_first, opts);

  // Read the completion off the connecting data, checking every forced block.
  std::vector<GradedMap> comps{phi1, phi2};
  std::vector<GradedObject> parts3{s.obj(2), t1};
  if (n == 3) {
    const GradedMap& sigma = octa.phis[0];
    std::vector<GradedObject> zparts{shift_s0, t.obj(2)};
    GradedMap top_left = compose(projection(fp, zparts, 0), compose(sigma, inclusion(fp, parts3, 0)));
    GradedMap top_right = compose(projection(fp, zparts, 0), compose(sigma, inclusion(fp, parts3, 1)));
    GradedMap bot_right = compose(projection(fp, zparts, 1), compose(sigma, inclusion(fp, parts3, 1)));
    if (!(top_left == scaled(s.map(2), fp.sign(n + 1))) || !top_right.is_zero() ||
        !(bot_right == negated(t.map(1))))
      throw CompletionError("connecting morphism has unexpected forced blocks", 3, to_text(s) + to_text(t));
    comps.push_back(scaled(compose(projection(fp, zparts, 1), compose(sigma, inclusion(fp, parts3, 0))),
                           fp.sign(n)));
  } else {
    const GradedMap& sigma3 = octa.phis[0];
    if (!(compose(sigma3, inclusion(fp, parts3, 1)) == t.map(1)))
      throw CompletionError("connecting morphism has unexpected forced blocks", 3, to_text(s) + to_text(t));
    comps.push_back(compose(sigma3, inclusion(fp, parts3, 0)));
    for (int i = 4; i <= n - 1; ++i)
      comps.push_back(scaled(octa.phis[static_cast<std::size_t>(i) - 3], fp.sign(i)));
    const GradedMap& sigman = octa.phis[static_cast<std::size_t>(n) - 3];
    std::vector<GradedObject> zparts{shift_s0, t.obj(n - 1)};
    GradedMap top = compose(projection(fp, zparts, 0), sigman);
    if (!(top == scaled(s.map(n - 1), fp.sign(n + 1))))
      throw CompletionError("connecting morphism has unexpected forced blocks", n, to_text(s) + to_text(t));
    comps.push_back(scaled(compose(projection(fp, zparts, 1), sigman), fp.sign(n)));
  }

  // ψ_{2n-5} must be the displayed wrap matrix.
  {
    std::vector<GradedObject> srcs{shift_s0, t.obj(n - 1)};
    std::vector<GradedObject> tgts{shift_s1, shift_t0};
    std::vector<std::vector<std::optional<GradedMap>>> cells(2,
        std::vector<std::optional<GradedMap>>(2, std::nullopt));
    cells[0][0] = negated(shift_map(s.map(0), k));
    cells[1][0] = shift_map(phi1, k);
    cells[1][1] = t.map(n - 1);
    GradedMap expected = grid_map(fp, tgts, srcs, cells);
    if (!(octa.psis.back() == expected))
      throw CompletionError("connecting map ψ_{2n-5} differs from the displayed matrix", 2 * n - 5,
                            to_text(s) + to_text(t));
  }

  SeqMorphism mor = make_morphism(s, t, std::move(comps));
  if (!is_morphism(mor))
    throw CompletionError("extracted completion is not a morphism", first_violated_square(mor),
                          to_text(mor));
  NSeq cone = mapping_cone(mor);
  if (!is_exact(cone))
    throw CompletionError("extracted completion has an inexact cone", first_inexact_position(cone),
                          to_text(mor));
  return ConeCompletion{std::move(mor), std::move(cone)};
}

}  // namespace nangle
