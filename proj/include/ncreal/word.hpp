#ifndef NCREAL_WORD_HPP
#define NCREAL_WORD_HPP

#include <ncreal/rational.hpp>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ncreal {

/// A word g_{i1} ... g_{il} in the free monoid on d letters. Letters are
/// stored 0-based; text form is 1-based ("g1g2", empty word "e" or "").
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::size_t> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<std::size_t> letters) : letters_(letters) {}

  static Word parse(std::string_view text) {
    std::vector<std::size_t> letters;
    if (text == "e" || text == "1") return Word();
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] != 'g') throw InputError("malformed word '" + std::string(text) + "'");
      std::size_t b = ++i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      if (b == i) throw InputError("malformed word '" + std::string(text) + "'");
      std::size_t k = std::stoul(std::string(text.substr(b, i - b)));
      if (k == 0) throw InputError("word letters are numbered from 1");
      letters.push_back(k - 1);
    }
    return Word(std::move(letters));
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::size_t operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<std::size_t>& letters() const { return letters_; }

  /// Copy with letter k inserted before position pos.
  Word inserted(std::size_t pos, std::size_t k) const {
    auto l = letters_;
    l.insert(l.begin() + static_cast<std::ptrdiff_t>(pos), k);
    return Word(std::move(l));
  }

  std::size_t max_letter() const {
    std::size_t m = 0;
    for (auto l : letters_) m = std::max(m, l + 1);
    return m;
  }

  std::string str() const {
    if (letters_.empty()) return "e";
    std::string s;
    for (auto l : letters_) s += "g" + std::to_string(l + 1);
    return s;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<std::size_t> letters_;
};

/// Calls f on every word over d letters of length exactly len.
inline void for_each_word(std::size_t d, std::size_t len, const std::function<void(const Word&)>& f) {
  std::vector<std::size_t> l(len, 0);
  if (len > 0 && d == 0) return;
  for (;;) {
    f(Word(l));
    std::size_t i = len;
    while (i > 0) {
      if (++l[i - 1] < d) break;
      l[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

}  // namespace ncreal

#endif  // NCREAL_WORD_HPP
