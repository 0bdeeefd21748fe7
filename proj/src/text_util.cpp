#include "genmine/text_util.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace genmine {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string_view strip_punct(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_punct(s[b])) ++b;
  while (e > b && is_punct(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> normalized_words(std::string_view s) {
  std::vector<std::string> out;
  for (std::string_view w : split_whitespace(s)) {
    std::string_view core = strip_punct(w);
    if (!core.empty()) out.push_back(lowercase(core));
  }
  return out;
}

bool is_all_punct(std::string_view s) {
  for (char c : s) {
    if (!is_punct(c)) return false;
  }
  return true;
}

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    if (!line.empty() && line.front() != '#') out.push_back(lowercase(line));
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> read_word_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read word list: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_word_list(buf.str());
}

std::string utf8_prefix(std::string_view s, std::size_t max_chars) {
  std::size_t chars = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (chars == max_chars) break;
      ++chars;
    }
    ++i;
  }
  return std::string(s.substr(0, i));
}

}  // namespace genmine
