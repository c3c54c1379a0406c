#include "nangle/sequence.hpp"

#include <algorithm>

#include "nangle/mapsystem.hpp"

namespace nangle {

GradedObject NSeq::map_target(int i) const {
  return i + 1 < n ? objects[static_cast<std::size_t>(i) + 1] : shift_object(objects[0], shift);
}

NSeq make_nseq(int n, int shift, Fp fp, std::vector<GradedObject> objects,
               std::vector<GradedMap> maps) {
  if (n < 3) throw ShapeError("n-Σ-sequence needs n >= 3");
  if (shift < 1) throw ShapeError("shift power must be positive");
  if (objects.size() != static_cast<std::size_t>(n) || maps.size() != static_cast<std::size_t>(n))
    throw ShapeError("n-Σ-sequence needs n objects and n maps");
  NSeq s{n, shift, fp, std::move(objects), std::move(maps)};
  for (int i = 0; i < n; ++i) {
    if (!(s.map(i).src() == s.obj(i)))
      throw ShapeError("map " + std::to_string(i) + " source mismatch");
    if (!(s.map(i).tgt() == s.map_target(i)))
      throw ShapeError("map " + std::to_string(i) + " target mismatch");
  }
  return s;
}

SeqMorphism make_morphism(NSeq source, NSeq target, std::vector<GradedMap> components) {
  if (source.n != target.n || source.shift != target.shift || !(source.fp == target.fp))
    throw ShapeError("morphism endpoints have different shape parameters");
  if (components.size() != static_cast<std::size_t>(source.n))
    throw ShapeError("morphism needs n components");
  for (int i = 0; i < source.n; ++i) {
    if (!(components[static_cast<std::size_t>(i)].src() == source.obj(i)) ||
        !(components[static_cast<std::size_t>(i)].tgt() == target.obj(i)))
      throw ShapeError("morphism component " + std::to_string(i) + " shape mismatch");
  }
  return SeqMorphism{std::move(source), std::move(target), std::move(components)};
}

int first_violated_square(const SeqMorphism& m) {
  int n = m.source.n;
  for (int i = 0; i < n; ++i) {
    GradedMap next = i + 1 < n ? m.components[static_cast<std::size_t>(i) + 1]
                               : shift_map(m.components[0], m.source.shift);
    if (!(compose(next, m.source.map(i)) == compose(m.target.map(i), m.components[static_cast<std::size_t>(i)])))
      return i;
  }
  return -1;
}

bool is_morphism(const SeqMorphism& m) { return first_violated_square(m) == -1; }

NSeq rotate_left(const NSeq& s) {
  std::vector<GradedObject> objects(s.objects.begin() + 1, s.objects.end());
  objects.push_back(shift_object(s.objects[0], s.shift));
  std::vector<GradedMap> maps(s.maps.begin() + 1, s.maps.end());
  maps.push_back(scaled(shift_map(s.maps[0], s.shift), s.fp.sign(s.n)));
  return make_nseq(s.n, s.shift, s.fp, std::move(objects), std::move(maps));
}

NSeq rotate_right(const NSeq& s) {
  std::vector<GradedObject> objects;
  objects.push_back(shift_object(s.objects.back(), -s.shift));
  objects.insert(objects.end(), s.objects.begin(), s.objects.end() - 1);
  std::vector<GradedMap> maps;
  maps.push_back(scaled(shift_map(s.maps.back(), -s.shift), s.fp.sign(s.n)));
  maps.insert(maps.end(), s.maps.begin(), s.maps.end() - 1);
  return make_nseq(s.n, s.shift, s.fp, std::move(objects), std::move(maps));
}

NSeq rotate_left(const NSeq& s, int times) {
  NSeq out = s;
  for (int k = 0; k < times; ++k) out = rotate_left(out);
  return out;
}

NSeq trivial_seq(const GradedObject& a, int j, int n, Fp fp, int shift) {
  if (j < 0 || j >= n) throw ShapeError("trivial sequence rotation index out of range");
  GradedObject zero;
  std::vector<GradedObject> objects(static_cast<std::size_t>(n), zero);
  objects[0] = a;
  objects[1] = a;
  std::vector<GradedMap> maps;
  maps.push_back(GradedMap::identity(fp, a));
  for (int i = 1; i < n - 1; ++i)
    maps.push_back(GradedMap::zero(fp, objects[static_cast<std::size_t>(i)],
                                   objects[static_cast<std::size_t>(i) + 1]));
  maps.push_back(GradedMap::zero(fp, objects.back(), shift_object(a, shift)));
  return rotate_left(make_nseq(n, shift, fp, std::move(objects), std::move(maps)), j);
}

NSeq direct_sum_seq(const NSeq& s, const NSeq& t) {
  if (s.n != t.n || s.shift != t.shift || !(s.fp == t.fp))
    throw ShapeError("direct sum of sequences with different shape parameters");
  std::vector<GradedObject> objects;
  std::vector<GradedMap> maps;
  for (int i = 0; i < s.n; ++i) objects.push_back(direct_sum(s.obj(i), t.obj(i)));
  for (int i = 0; i < s.n; ++i) maps.push_back(direct_sum_map(s.map(i), t.map(i)));
  return make_nseq(s.n, s.shift, s.fp, std::move(objects), std::move(maps));
}

NSeq conjugate(const NSeq& s, const std::vector<GradedMap>& isos) {
  if (isos.size() != static_cast<std::size_t>(s.n)) throw ShapeError("conjugate: need n isomorphisms");
  std::vector<GradedObject> objects;
  std::vector<GradedMap> maps;
  std::vector<GradedMap> invs;
  for (int i = 0; i < s.n; ++i) {
    if (!(isos[static_cast<std::size_t>(i)].src() == s.obj(i)))
      throw ShapeError("conjugate: isomorphism source mismatch");
    auto inv = inverse(isos[static_cast<std::size_t>(i)]);
    if (!inv) throw ShapeError("conjugate: component is not an isomorphism");
    invs.push_back(*inv);
    objects.push_back(isos[static_cast<std::size_t>(i)].tgt());
  }
  for (int i = 0; i < s.n; ++i) {
    GradedMap post = i + 1 < s.n ? isos[static_cast<std::size_t>(i) + 1] : shift_map(isos[0], s.shift);
    maps.push_back(compose(post, compose(s.map(i), invs[static_cast<std::size_t>(i)])));
  }
  return make_nseq(s.n, s.shift, s.fp, std::move(objects), std::move(maps));
}

int first_inexact_position(const NSeq& s) {
  for (int i = 0; i < s.n; ++i) {
    const GradedMap& out = s.map(i);
    GradedMap in = i == 0 ? shift_map(s.map(s.n - 1), -s.shift) : s.map(i - 1);
    if (!compose(out, in).is_zero()) return i;
    for (auto& [d, dim] : s.obj(i).dims()) {
      std::size_t r_in = in.has_block(d) ? in.block(d).rank() : 0;
      std::size_t r_out = out.has_block(d) ? out.block(d).rank() : 0;
      if (r_in + r_out != static_cast<std::size_t>(dim)) return i;
    }
  }
  return -1;
}

bool is_exact(const NSeq& s) { return first_inexact_position(s) == -1; }

bool is_weak_iso(const SeqMorphism& m) {
  if (!is_morphism(m)) throw ShapeError("is_weak_iso: input is not a morphism of sequences");
  int n = m.source.n;
  for (int i = 0; i < n; ++i) {
    const GradedMap& a = m.components[static_cast<std::size_t>(i)];
    GradedMap b = i + 1 < n ? m.components[static_cast<std::size_t>(i) + 1]
                            : shift_map(m.components[0], m.source.shift);
    if (is_isomorphism(a) && is_isomorphism(b)) return true;
  }
  return false;
}

NSeq mapping_cone(const SeqMorphism& m) {
  if (!is_morphism(m)) throw ShapeError("mapping_cone: input is not a morphism of sequences");
  const NSeq& a = m.source;
  const NSeq& b = m.target;
  int n = a.n;
  Fp fp = a.fp;
  std::vector<GradedObject> objects;
  for (int i = 0; i < n; ++i) objects.push_back(direct_sum(a.map_target(i), b.obj(i)));
  std::vector<GradedMap> maps;
  for (int i = 0; i + 1 < n; ++i) {
    GradedMap tl = negated(a.map(i + 1));
    const GradedMap& bl = m.components[static_cast<std::size_t>(i) + 1];
    const GradedMap& br = b.map(i);
    maps.push_back(block_map(fp, {a.map_target(i + 1), b.obj(i + 1)}, {a.map_target(i), b.obj(i)},
                             {{&tl, nullptr}, {&bl, &br}}));
  }
  GradedMap tl = negated(shift_map(a.map(0), a.shift));
  GradedMap bl = shift_map(m.components[0], a.shift);
  const GradedMap& br = b.map(n - 1);
  maps.push_back(block_map(fp, {shift_object(a.map_target(0), a.shift), shift_object(b.obj(0), b.shift)},
                           {a.map_target(n - 1), b.obj(n - 1)}, {{&tl, nullptr}, {&bl, &br}}));
  return make_nseq(n, a.shift, fp, std::move(objects), std::move(maps));
}

namespace {

// Rotation index of the trivial piece whose carrier pair starts at the
// (0-based) map position i.
int piece_rotation(int i, int n) {
  int pos1 = i + 1;
  if (pos1 == 1) return 0;
  if (pos1 == n) return 1;
  return n + 1 - pos1;
}

struct PieceData {
  TrivialPiece piece;
  int start;            // 0-based pair start position
  GradedMap emb_start;  // embedding at the start position
  GradedMap emb_next;   // embedding at the following (cyclic) position
};

}  // namespace

std::optional<Decomposition> try_decompose(const NSeq& s) {
  Fp fp = s.fp;
  std::vector<PieceData> data;
  for (int i = 0; i < s.n; ++i) {
    const GradedMap& m = s.map(i);
    // Complement of the kernel, degreewise from row-reduction pivots.
    std::map<int, int> comp_dims;
    std::map<int, Matrix> comp_blocks;
    for (auto& [d, dim] : s.obj(i).dims()) {
      Matrix blk = m.block(d);
      Matrix c = extend_to_basis(blk.kernel_basis());
      if (c.cols() > 0) {
        comp_dims[d] = static_cast<int>(c.cols());
        comp_blocks.emplace(d, c);
      }
      (void)dim;
    }
    GradedObject carrier(comp_dims);
    if (carrier.is_zero()) continue;
    GradedMap c_i(fp, carrier, s.obj(i));
    for (auto& [d, blk] : comp_blocks) c_i.set_block(d, blk);

    PieceData pd;
    pd.start = i;
    pd.piece.j = piece_rotation(i, s.n);
    std::uint32_t eps = (i == 0) ? 1u : fp.sign(s.n);
    if (i + 1 < s.n) {
      pd.piece.base = (i == 0) ? carrier : shift_object(carrier, -s.shift);
      pd.emb_next = scaled(compose(m, c_i), eps);
    } else {
      pd.piece.base = shift_object(carrier, -s.shift);
      pd.emb_next = scaled(shift_map(compose(m, c_i), -s.shift), eps);
    }
    pd.emb_start = std::move(c_i);
    data.push_back(std::move(pd));
  }

  std::vector<TrivialPiece> pieces;
  std::vector<NSeq> piece_seqs;
  for (auto& pd : data) {
    pieces.push_back(pd.piece);
    piece_seqs.push_back(trivial_seq(pd.piece.base, pd.piece.j, s.n, fp, s.shift));
  }
  NSeq sum = pieces_to_seq(pieces, s.n, fp, s.shift);

  std::vector<GradedMap> comps;
  for (int t = 0; t < s.n; ++t) {
    std::vector<GradedObject> srcs;
    std::vector<const GradedMap*> row;
    for (std::size_t k = 0; k < data.size(); ++k) {
      srcs.push_back(piece_seqs[k].obj(t));
      const PieceData& pd = data[k];
      if (t == pd.start)
        row.push_back(&pd.emb_start);
      else if (t == (pd.start + 1) % s.n)
        row.push_back(&pd.emb_next);
      else
        row.push_back(nullptr);
    }
    comps.push_back(block_map(fp, {s.obj(t)}, srcs, {row}));
  }

  SeqMorphism phi = make_morphism(sum, s, comps);
  for (auto& c : phi.components)
    if (!is_isomorphism(c)) return std::nullopt;
  if (!is_morphism(phi)) return std::nullopt;
  return Decomposition{std::move(pieces), std::move(phi)};
}

Decomposition decompose_exact(const NSeq& s) {
  auto d = try_decompose(s);
  if (!d) throw ShapeError("decompose_exact: input sequence is not exact");
  return *d;
}

NSeq pieces_to_seq(const std::vector<TrivialPiece>& pieces, int n, Fp fp, int shift) {
  GradedObject zero;
  std::vector<GradedObject> objects(static_cast<std::size_t>(n), zero);
  std::vector<GradedMap> maps;
  for (int i = 0; i < n; ++i)
    maps.push_back(GradedMap::zero(fp, zero, zero));
  NSeq out = make_nseq(n, shift, fp, std::move(objects), std::move(maps));
  for (auto& p : pieces) out = direct_sum_seq(out, trivial_seq(p.base, p.j, n, fp, shift));
  return out;
}

RandomExact random_exact_gen(Fp fp, const GenParams& params, Rng& rng) {
  int count = params.pieces >= 0 ? params.pieces : static_cast<int>(1 + rng.below(3));
  std::vector<TrivialPiece> pieces;
  for (int k = 0; k < count; ++k) {
    TrivialPiece p;
    p.j = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.n)));
    p.base = random_object(rng, params.max_dim, params.deg_lo, params.deg_hi);
    pieces.push_back(std::move(p));
  }
  NSeq sum = pieces_to_seq(pieces, params.n, fp, params.shift);
  std::vector<GradedMap> isos;
  for (int i = 0; i < params.n; ++i) isos.push_back(random_iso(fp, sum.obj(i), rng));
  NSeq seq = conjugate(sum, isos);
  return RandomExact{std::move(seq), std::move(pieces), std::move(isos)};
}

NSeq random_exact(Fp fp, const GenParams& params, Rng& rng) {
  return random_exact_gen(fp, params, rng).seq;
}

NSeq complete_first_morphism(const GradedMap& alpha, int n, int shift) {
  Fp fp = alpha.field();
  const GradedObject& a1 = alpha.src();
  const GradedObject& a2 = alpha.tgt();

  // Split A1 into ker(alpha) and a pivot-chosen complement, and A2 into
  // im(alpha) and a complement.
  std::map<int, int> comp_dims, ker_dims, cok_dims;
  std::map<int, Matrix> comp_blocks, ker_blocks, cok_blocks;
  for (auto& [d, dim] : a1.dims()) {
    (void)dim;
    Matrix blk = alpha.block(d);
    Matrix k = blk.kernel_basis();
    Matrix c = extend_to_basis(k);
    if (k.cols() > 0) {
      ker_dims[d] = static_cast<int>(k.cols());
      ker_blocks.emplace(d, k);
    }
    if (c.cols() > 0) {
      comp_dims[d] = static_cast<int>(c.cols());
      comp_blocks.emplace(d, c);
    }
  }
  for (auto& [d, dim] : a2.dims()) {
    (void)dim;
    Matrix q = extend_to_basis(alpha.block(d).image_basis());
    if (q.cols() > 0) {
      cok_dims[d] = static_cast<int>(q.cols());
      cok_blocks.emplace(d, q);
    }
  }
  GradedObject comp_obj{comp_dims}, ker_obj{ker_dims}, cok_obj{cok_dims};
  GradedMap c_inc(fp, comp_obj, a1), k_inc(fp, ker_obj, a1), q_inc(fp, cok_obj, a2);
  for (auto& [d, b] : comp_blocks) c_inc.set_block(d, b);
  for (auto& [d, b] : ker_blocks) k_inc.set_block(d, b);
  for (auto& [d, b] : cok_blocks) q_inc.set_block(d, b);

  std::vector<TrivialPiece> pieces = {
      {comp_obj, 0},                                // image carrier across positions 1,2
      {ker_obj, 1},                                 // kernel at the wrap pair (n,1)
      {shift_object(cok_obj, -shift), n - 1},       // cokernel entering at position 2
  };
  NSeq sum = pieces_to_seq(pieces, n, fp, shift);

  GradedMap u0 = block_map(fp, {a1}, {comp_obj, ker_obj}, {{&c_inc, &k_inc}});
  GradedMap ac = compose(alpha, c_inc);
  GradedMap u1 = block_map(fp, {a2}, {comp_obj, cok_obj}, {{&ac, &q_inc}});
  std::vector<GradedMap> isos;
  isos.push_back(u0);
  isos.push_back(u1);
  for (int i = 2; i < n; ++i) isos.push_back(GradedMap::identity(fp, sum.obj(i)));
  NSeq out = conjugate(sum, isos);
  if (!(out.map(0) == alpha) || !is_exact(out))
    throw ShapeError("complete_first_morphism: construction failed to reproduce the map");
  return out;
}

SeqMorphism random_morphism(const NSeq& s, const NSeq& t, Rng& rng) {
  if (s.n != t.n || s.shift != t.shift || !(s.fp == t.fp))
    throw ShapeError("random_morphism: shape parameters differ");
  Fp fp = s.fp;
  MapSystem sys(fp);
  std::vector<int> u;
  for (int i = 0; i < s.n; ++i) u.push_back(sys.add_unknown(s.obj(i), t.obj(i)));
  for (int i = 0; i < s.n; ++i) {
    GradedMap zero = GradedMap::zero(fp, s.obj(i), t.map_target(i));
    if (i + 1 < s.n) {
      sys.require({{u[static_cast<std::size_t>(i) + 1], GradedMap::identity(fp, t.obj(i + 1)), s.map(i), 0},
                   {u[static_cast<std::size_t>(i)], negated(t.map(i)), GradedMap::identity(fp, s.obj(i)), 0}},
                  zero);
    } else {
      sys.require({{u[0], GradedMap::identity(fp, shift_object(t.obj(0), t.shift)), s.map(i), s.shift},
                   {u[static_cast<std::size_t>(i)], negated(t.map(i)), GradedMap::identity(fp, s.obj(i)), 0}},
                  zero);
    }
  }
  auto sol = sys.solve();
  if (!sol) throw ShapeError("random_morphism: homogeneous system reported inconsistent");
  std::vector<std::uint32_t> coeffs;
  coeffs.reserve(sol->dof());
  for (std::size_t k = 0; k < sol->dof(); ++k)
    coeffs.push_back(static_cast<std::uint32_t>(rng.below(fp.p)));
  return make_morphism(s, t, sol->materialize(coeffs));
}

bool isomorphic_exact(const NSeq& s, const NSeq& t) {
  if (s.n != t.n || s.shift != t.shift || !(s.fp == t.fp)) return false;
  for (int i = 0; i < s.n; ++i)
    if (!(s.obj(i).dims() == t.obj(i).dims())) return false;
  // Equal object dimensions force equal block supports, so comparing block
  // ranks degreewise is enough.
  for (int i = 0; i < s.n; ++i)
    for (auto& [d, blk] : s.map(i).blocks())
      if (blk.rank() != t.map(i).block(d).rank()) return false;
  return true;
}

}  // namespace nangle
