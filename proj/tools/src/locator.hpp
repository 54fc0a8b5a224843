#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>

namespace catmeas::cli {

/// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

/// Maps every JSON pointer in a well-formed document to the line and column
/// where its value starts.
class Locator {
 public:
  explicit Locator(const std::string& text);
  /// Position of the pointer, or of its nearest located ancestor.
  std::pair<std::size_t, std::size_t> find(std::string pointer) const;

 private:
  void value(const std::string& pointer);
  std::string string_token();
  void skip_space();

  const std::string& text_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> offsets_;
};

}  // namespace catmeas::cli
