#include "nangle/io.hpp"

#include <cctype>
#include <sstream>

#include "nangle/cluster.hpp"

namespace nangle {
namespace io_detail {

Tokens::Tokens(const std::string& text) {
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      toks_.push_back(cur);
      cur.clear();
    }
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == '{' || ch == '}' || ch == '[' || ch == ']') {
      flush();
      toks_.push_back(std::string(1, ch));
    } else {
      cur.push_back(ch);
    }
  }
  flush();
}

const std::string& Tokens::peek() const {
  static const std::string kEof = "<eof>";
  return pos_ < toks_.size() ? toks_[pos_] : kEof;
}

std::string Tokens::next() {
  if (pos_ >= toks_.size()) throw ParseError("unexpected end of input");
  return toks_[pos_++];
}

void Tokens::expect(const std::string& tok) {
  std::string got = next();
  if (got != tok) throw ParseError("expected '" + tok + "', found '" + got + "'");
}

long long Tokens::integer() {
  std::string tok = next();
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw ParseError("trailing characters in integer '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("expected integer, found '" + tok + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range: '" + tok + "'");
  }
}

namespace {
void pad(std::string& out, int indent) { out.append(static_cast<std::size_t>(indent), ' '); }
}  // namespace

void write_object(std::string& out, const GradedObject& x, int indent) {
  pad(out, indent);
  out += "obj {";
  for (auto& [d, n] : x.dims()) out += " " + std::to_string(d) + ":" + std::to_string(n);
  out += " }\n";
}

void write_map_body(std::string& out, const GradedMap& f, int indent) {
  pad(out, indent);
  out += "map {\n";
  for (auto& [d, blk] : f.blocks()) {
    pad(out, indent + 2);
    out += "deg " + std::to_string(d) + " [";
    for (std::size_t r = 0; r < blk.rows(); ++r)
      for (std::size_t c = 0; c < blk.cols(); ++c) out += " " + std::to_string(blk.at(r, c));
    out += " ]\n";
  }
  pad(out, indent);
  out += "}\n";
}

void write_nseq_body(std::string& out, const NSeq& s, int indent) {
  pad(out, indent);
  out += "nseq {\n";
  pad(out, indent + 2);
  out += "prime " + std::to_string(s.fp.p) + "\n";
  pad(out, indent + 2);
  out += "n " + std::to_string(s.n) + "\n";
  pad(out, indent + 2);
  out += "shift " + std::to_string(s.shift) + "\n";
  pad(out, indent + 2);
  out += "objects {\n";
  for (auto& x : s.objects) write_object(out, x, indent + 4);
  pad(out, indent + 2);
  out += "}\n";
  pad(out, indent + 2);
  out += "maps {\n";
  for (auto& f : s.maps) write_map_body(out, f, indent + 4);
  pad(out, indent + 2);
  out += "}\n";
  pad(out, indent);
  out += "}\n";
}

GradedObject read_object(Tokens& t) {
  t.expect("obj");
  t.expect("{");
  std::map<int, int> dims;
  while (t.peek() != "}") {
    std::string tok = t.next();
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw ParseError("expected degree:dim pair, found '" + tok + "'");
    try {
      int d = std::stoi(tok.substr(0, colon));
      int n = std::stoi(tok.substr(colon + 1));
      if (n < 0) throw ParseError("negative dimension in object");
      if (dims.count(d)) throw ParseError("duplicate degree in object");
      dims[d] = n;
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed degree:dim pair '" + tok + "'");
    }
  }
  t.expect("}");
  return GradedObject(dims);
}

GradedMap read_map_body(Tokens& t, Fp fp, const GradedObject& src, const GradedObject& tgt) {
  t.expect("map");
  t.expect("{");
  GradedMap f(fp, src, tgt);
  std::size_t seen = 0;
  while (t.peek() != "}") {
    t.expect("deg");
    long long d = t.integer();
    if (!f.has_block(static_cast<int>(d)))
      throw ParseError("map block at degree " + std::to_string(d) +
                       " lies outside the support of its endpoints");
    std::size_t rows = static_cast<std::size_t>(tgt.dim(static_cast<int>(d)));
    std::size_t cols = static_cast<std::size_t>(src.dim(static_cast<int>(d)));
    Matrix blk(fp, rows, cols);
    t.expect("[");
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        long long v = t.integer();
        if (v < 0 || v >= static_cast<long long>(fp.p))
          throw ParseError("matrix entry " + std::to_string(v) + " not reduced modulo " +
                           std::to_string(fp.p));
        blk.set(r, c, static_cast<std::uint32_t>(v));
      }
    t.expect("]");
    f.set_block(static_cast<int>(d), blk);
    ++seen;
  }
  t.expect("}");
  if (seen != f.blocks().size())
    throw ParseError("map is missing blocks: expected " + std::to_string(f.blocks().size()) +
                     ", found " + std::to_string(seen));
  return f;
}

NSeq read_nseq_body(Tokens& t) {
  t.expect("nseq");
  t.expect("{");
  t.expect("prime");
  long long p = t.integer();
  if (p < 2 || !is_prime(static_cast<std::uint32_t>(p))) throw ParseError("prime field modulus required");
  Fp fp{static_cast<std::uint32_t>(p)};
  t.expect("n");
  long long n = t.integer();
  if (n < 3) throw ParseError("n must be at least 3");
  t.expect("shift");
  long long shift = t.integer();
  if (shift < 1) throw ParseError("shift must be positive");
  t.expect("objects");
  t.expect("{");
  std::vector<GradedObject> objects;
  while (t.peek() != "}") objects.push_back(read_object(t));
  t.expect("}");
  if (objects.size() != static_cast<std::size_t>(n)) throw ParseError("object count differs from n");
  t.expect("maps");
  t.expect("{");
  std::vector<GradedMap> maps;
  for (long long i = 0; i < n; ++i) {
    GradedObject tgt = i + 1 < n ? objects[static_cast<std::size_t>(i) + 1]
                                 : shift_object(objects[0], static_cast<int>(shift));
    maps.push_back(read_map_body(t, fp, objects[static_cast<std::size_t>(i)], tgt));
  }
  t.expect("}");
  t.expect("}");
  try {
    return make_nseq(static_cast<int>(n), static_cast<int>(shift), fp, std::move(objects),
                     std::move(maps));
  } catch (const ShapeError& e) {
    throw ParseError(std::string("sequence fails validation: ") + e.what());
  }
}

}  // namespace io_detail

using io_detail::Tokens;

std::string to_text(const NSeq& s) {
  std::string out = "nangle v1\n";
  io_detail::write_nseq_body(out, s, 0);
  return out;
}

std::string to_text(const SeqMorphism& m) {
  std::string out = "nangle v1\n";
  out += "morphism {\n";
  out += "  source\n";
  io_detail::write_nseq_body(out, m.source, 2);
  out += "  target\n";
  io_detail::write_nseq_body(out, m.target, 2);
  out += "  components {\n";
  for (auto& c : m.components) io_detail::write_map_body(out, c, 4);
  out += "  }\n";
  out += "}\n";
  return out;
}

namespace {
void read_header(Tokens& t) {
  t.expect("nangle");
  t.expect("v1");
}
}  // namespace

DocKind peek_kind(const std::string& text) {
  Tokens t(text);
  read_header(t);
  std::string kind = t.peek();
  if (kind == "nseq") return DocKind::NSeqDoc;
  if (kind == "morphism") return DocKind::MorphismDoc;
  if (kind == "splice4") return DocKind::Splice4Doc;
  throw ParseError("unknown document kind '" + kind + "'");
}

NSeq parse_nseq(const std::string& text) {
  Tokens t(text);
  read_header(t);
  NSeq s = io_detail::read_nseq_body(t);
  if (!t.done()) throw ParseError("trailing tokens after sequence");
  return s;
}

std::string to_text(const Splice4& sp) {
  std::string out = "nangle v1\n";
  out += "splice4 {\n";
  out += "  angle\n";
  io_detail::write_nseq_body(out, sp.angle, 2);
  out += "  x\n";
  io_detail::write_object(out, sp.x, 2);
  out += "  f\n";
  io_detail::write_map_body(out, sp.f, 2);
  out += "  g\n";
  io_detail::write_map_body(out, sp.g, 2);
  out += "  d1\n";
  io_detail::write_map_body(out, sp.d1, 2);
  out += "  d2\n";
  io_detail::write_map_body(out, sp.d2, 2);
  out += "}\n";
  return out;
}

Splice4 parse_splice4(const std::string& text) {
  Tokens t(text);
  t.expect("nangle");
  t.expect("v1");
  t.expect("splice4");
  t.expect("{");
  t.expect("angle");
  NSeq angle = io_detail::read_nseq_body(t);
  if (angle.n != 4 || angle.shift != 2)
    throw ParseError("splice4 expects a 4-angle over the squared shift");
  t.expect("x");
  GradedObject x = io_detail::read_object(t);
  Fp fp = angle.fp;
  t.expect("f");
  GradedMap f = io_detail::read_map_body(t, fp, angle.obj(1), x);
  t.expect("g");
  GradedMap g = io_detail::read_map_body(t, fp, x, angle.obj(2));
  t.expect("d1");
  GradedMap d1 = io_detail::read_map_body(t, fp, angle.obj(3), shift_object(x, 1));
  t.expect("d2");
  GradedMap d2 = io_detail::read_map_body(t, fp, x, shift_object(angle.obj(0), 1));
  t.expect("}");
  if (!t.done()) throw ParseError("trailing tokens after splice4");
  Splice4 sp{std::move(angle), std::move(x), std::move(f), std::move(g), std::move(d1),
             std::move(d2)};
  try {
    Splice4 rebuilt = splice_4angle(sp.delta1(), sp.delta2());
    if (!(rebuilt == sp)) throw ParseError("splice4 data is not the splice of its triangles");
  } catch (const ShapeError& e) {
    throw ParseError(std::string("splice4 fails validation: ") + e.what());
  } catch (const CompletionError& e) {
    throw ParseError(std::string("splice4 fails validation: ") + e.what());
  }
  return sp;
}

SeqMorphism parse_morphism(const std::string& text) {
  Tokens t(text);
  read_header(t);
  t.expect("morphism");
  t.expect("{");
  t.expect("source");
  NSeq source = io_detail::read_nseq_body(t);
  t.expect("target");
  NSeq target = io_detail::read_nseq_body(t);
  t.expect("components");
  t.expect("{");
  std::vector<GradedMap> comps;
  for (int i = 0; i < source.n; ++i)
    comps.push_back(io_detail::read_map_body(t, source.fp, source.obj(i), target.obj(i)));
  t.expect("}");
  t.expect("}");
  if (!t.done()) throw ParseError("trailing tokens after morphism");
  try {
    return make_morphism(std::move(source), std::move(target), std::move(comps));
  } catch (const ShapeError& e) {
    throw ParseError(std::string("morphism fails validation: ") + e.what());
  }
}

}  // namespace nangle
