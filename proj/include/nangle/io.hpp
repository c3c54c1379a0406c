#pragma once

#include <string>

#include "nangle/sequence.hpp"

namespace nangle {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Text format for exchanging exact-arithmetic values. Base-10 integers
/// only; printing is deterministic (degrees ascending), and
/// parse(print(x)) == x holds structurally. The grammar ships in
/// docs/FORMAT.md.
std::string to_text(const NSeq& s);
std::string to_text(const SeqMorphism& m);

enum class DocKind { NSeqDoc, MorphismDoc, Splice4Doc };

/// Kind of the top-level value in a document.
DocKind peek_kind(const std::string& text);

NSeq parse_nseq(const std::string& text);
SeqMorphism parse_morphism(const std::string& text);

// Body-level helpers shared with the splice serialization in cluster_io.
namespace io_detail {

class Tokens {
 public:
  explicit Tokens(const std::string& text);
  const std::string& peek() const;
  std::string next();
  void expect(const std::string& tok);
  long long integer();
  bool done() const { return pos_ >= toks_.size(); }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

void write_object(std::string& out, const GradedObject& x, int indent);
void write_map_body(std::string& out, const GradedMap& f, int indent);
void write_nseq_body(std::string& out, const NSeq& s, int indent);
GradedObject read_object(Tokens& t);
GradedMap read_map_body(Tokens& t, Fp fp, const GradedObject& src, const GradedObject& tgt);
NSeq read_nseq_body(Tokens& t);

}  // namespace io_detail

}  // namespace nangle
