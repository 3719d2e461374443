#include "bcaret/bits.hpp"

namespace bcaret {

std::size_t StateSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

std::vector<std::size_t> StateSet::members() const {
  std::vector<std::size_t> out;
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

}  // namespace bcaret
