#include "trgg/alphabet.hpp"

#include <stdexcept>
#include <utility>

namespace trgg {

TypeAlphabet::TypeAlphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet: must contain at least one symbol");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto [it, inserted] = index_.emplace(symbols_[i], static_cast<std::uint32_t>(i));
    if (!inserted) throw std::invalid_argument("alphabet: duplicate symbol '" + symbols_[i] + "'");
  }
}

TypeAlphabet TypeAlphabet::untyped() { return TypeAlphabet({"a"}); }

const std::string& TypeAlphabet::symbol(std::size_t i) const {
  if (i >= symbols_.size()) throw std::out_of_range("alphabet: symbol index out of range");
  return symbols_[i];
}

std::uint32_t TypeAlphabet::index(const std::string& symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end()) throw std::invalid_argument("alphabet: unknown symbol '" + symbol + "'");
  return it->second;
}

bool TypeAlphabet::contains(const std::string& symbol) const { return index_.count(symbol) > 0; }

}  // namespace trgg
