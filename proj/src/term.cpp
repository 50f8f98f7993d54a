#include "csanitize/term.hpp"

#include <cctype>

namespace csan {

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c + 0x20));
    } else if (c == 0xC3 && i + 1 < text.size()) {
      // UTF-8 Latin-1 supplement: U+00C0..U+00DE lowercase by +0x20,
      // skipping U+00D7 (multiplication sign).
      unsigned char c2 = static_cast<unsigned char>(text[i + 1]);
      out.push_back(static_cast<char>(c));
      if (c2 >= 0x80 && c2 <= 0x9E && c2 != 0x97) {
        out.push_back(static_cast<char>(c2 + 0x20));
      } else {
        out.push_back(static_cast<char>(c2));
      }
      ++i;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

CanonicalTerm CanonicalTerm::normalized(std::string_view surface) {
  std::string folded = fold_case(surface);
  std::string id;
  id.reserve(folded.size());
  bool pending_space = false;
  for (char ch : folded) {
    bool is_space = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (is_space) {
      pending_space = !id.empty();
    } else {
      if (pending_space) id.push_back(' ');
      pending_space = false;
      id.push_back(ch);
    }
  }
  return CanonicalTerm(std::move(id));
}

CanonicalTerm CanonicalTerm::from_canonical(std::string id) {
  return CanonicalTerm(std::move(id));
}

std::vector<std::string> CanonicalTerm::words() const {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < id_.size()) {
    std::size_t space = id_.find(' ', start);
    if (space == std::string::npos) {
      out.push_back(id_.substr(start));
      break;
    }
    out.push_back(id_.substr(start, space - start));
    start = space + 1;
  }
  return out;
}

}  // namespace csan
