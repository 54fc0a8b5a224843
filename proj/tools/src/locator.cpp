#include "locator.hpp"

#include <cctype>

namespace catmeas::cli {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

namespace {

std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

Locator::Locator(const std::string& text) : text_(text) {
  skip_space();
  if (pos_ < text_.size()) value("");
}

std::pair<std::size_t, std::size_t> Locator::find(std::string pointer) const {
  for (;;) {
    if (auto it = offsets_.find(pointer); it != offsets_.end()) return line_column(text_, it->second);
    if (pointer.empty()) return {0, 0};
    pointer.erase(pointer.rfind('/'));
  }
}

void Locator::skip_space() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
}

std::string Locator::string_token() {
  // Keys are compared after the same unescaping nlohmann applies to plain
  // escapes; \u sequences are kept verbatim, which only affects diagnostics.
  std::string out;
  ++pos_;
  while (pos_ < text_.size() && text_[pos_] != '"') {
    if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
      const char e = text_[++pos_];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'u': out += "\\u"; break;
        default: out += e;
      }
    } else {
      out += text_[pos_];
    }
    ++pos_;
  }
  ++pos_;
  return out;
}

void Locator::value(const std::string& pointer) {
  skip_space();
  if (pos_ >= text_.size()) return;
  offsets_[pointer] = pos_;
  const char c = text_[pos_];
  if (c == '{') {
    ++pos_;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == '}') break;
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      const std::string key = string_token();
      skip_space();
      ++pos_;  // ':'
      value(pointer + "/" + escape_pointer_token(key));
    }
    ++pos_;
  } else if (c == '[') {
    ++pos_;
    std::size_t index = 0;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ']') break;
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      value(pointer + "/" + std::to_string(index++));
    }
    ++pos_;
  } else if (c == '"') {
    string_token();
  } else {
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
}

}  // namespace catmeas::cli
