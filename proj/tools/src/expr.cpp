#include "catmeas_cli/expr.hpp"

#include "catmeas/errors.hpp"

#include <cctype>
#include <string>

namespace catmeas::cli {

namespace {

bool is_id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-' || c == ':' || c == '.' ||
         c == '@' || c == '*' || c == '#';
}

class Parser {
 public:
  Parser(const BoolAlg& alg, std::string_view text) : alg_(alg), text_(text) {}

  Element parse() {
    const Element e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, "element expression column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_id_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end");
    return std::string(text_.substr(start, pos_ - start));
  }

  Element atom(const std::string& id) const {
    const auto idx = alg_.index_of(id);
    if (!idx) throw Error(ErrorCode::UnresolvedReference, "element expression: unknown atom \"" + id + "\"");
    return Element::atom(*idx);
  }

  Element expr() {
    Element e = term();
    for (;;) {
      if (accept('|')) {
        e = e | term();
      } else if (accept('\\')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Element term() {
    Element e = factor();
    while (accept('&')) e = e & factor();
    return e;
  }

  Element factor() {
    if (accept('~')) return alg_.complement(factor());
    if (accept('(')) {
      const Element e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (accept('{')) {
      Element e;
      if (accept('}')) return e;
      do {
        e = e | atom(identifier());
      } while (accept(','));
      if (!accept('}')) fail("expected '}'");
      return e;
    }
    const std::string id = identifier();
    if (id == "top") return alg_.top();
    if (id == "bot") return alg_.bottom();
    return atom(id);
  }

  const BoolAlg& alg_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Element parse_element(const BoolAlg& alg, std::string_view text) { return Parser(alg, text).parse(); }

}  // namespace catmeas::cli
