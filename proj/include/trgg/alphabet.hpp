#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace trgg {

// Ordered finite alphabet of type symbols. The construction order fixes the
// index layout of every matrix keyed by type pairs, so two measures are
// comparable only when their alphabets compare equal.
class TypeAlphabet {
 public:
  TypeAlphabet() = default;
  explicit TypeAlphabet(std::vector<std::string> symbols);

  // Single-symbol alphabet used by the untyped G(n, m) model.
  static TypeAlphabet untyped();

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const;
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::uint32_t index(const std::string& symbol) const;
  bool contains(const std::string& symbol) const;

  bool operator==(const TypeAlphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const TypeAlphabet& other) const { return !(*this == other); }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, std::uint32_t> index_;
};

}  // namespace trgg
