#include "jxbw/corpus.hpp"

#include <fstream>
#include <sstream>

#include "jxbw/error.hpp"

namespace jxbw {
namespace {

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::size_t Corpus::total_nodes() const {
  std::size_t n = 0;
  for (const auto& t : trees) n += t.size();
  return n;
}

Corpus read_jsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  TreeId line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = strip_cr(line);
    if (is_blank(view)) continue;
    try {
      corpus.trees.push_back(parse_jsonl_line(view, line_no, corpus.labels));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return corpus;
}

Corpus read_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_jsonl(in);
}

Corpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_jsonl(in);
}

std::vector<std::string> read_lines(const std::filesystem::path& path, const IdSet& ids) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<std::string> out;
  out.reserve(ids.size());
  std::string line;
  TreeId line_no = 0;
  auto want = ids.begin();
  while (want != ids.end() && std::getline(in, line)) {
    ++line_no;
    if (line_no == *want) {
      out.emplace_back(strip_cr(line));
      ++want;
    }
  }
  return out;
}

}  // namespace jxbw
