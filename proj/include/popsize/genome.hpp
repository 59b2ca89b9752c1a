#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace popsize {

/// Fixed-length bit string. Bit 0 is the leftmost character of the textual
/// form; bits are packed MSB-first so that reading `len` consecutive bits
/// yields an integer whose most significant digit is the first bit.
class Genome {
 public:
  Genome() = default;
  explicit Genome(std::size_t length);

  static Genome from_string(std::string_view text);
  std::string to_string() const;

  std::size_t size() const { return length_; }

  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);

  /// Integer value of bits [pos, pos+len), first bit most significant. len <= 32.
  std::uint32_t get_block(std::size_t pos, unsigned len) const;
  void set_block(std::size_t pos, unsigned len, std::uint32_t value);

  std::size_t count_ones() const;

  /// Fills every bit uniformly at random.
  template <class Gen>
  void randomize(Gen& gen) {
    for (auto& w : words_) w = static_cast<std::uint64_t>(gen());
    clear_tail();
  }

  std::size_t hash() const;

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  void clear_tail();

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace popsize

template <>
struct std::hash<popsize::Genome> {
  std::size_t operator()(const popsize::Genome& g) const { return g.hash(); }
};
