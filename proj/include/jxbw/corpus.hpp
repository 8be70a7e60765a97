#ifndef JXBW_CORPUS_HPP
#define JXBW_CORPUS_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "jxbw/json_tree.hpp"

namespace jxbw {

/// All trees of one JSONL file plus the label pool they share.
struct Corpus {
  LabelPool labels;
  std::vector<JsonTree> trees;

  /// M_tot: sum of node counts over all trees.
  std::size_t total_nodes() const;
};

/// Reads JSONL: one object per '\n'-terminated line, CRLF tolerated, blank
/// lines skipped. Tree ids are physical 1-based line numbers, so ids stay
/// aligned with the file even when blank lines are present.
Corpus read_jsonl(std::istream& in);
Corpus read_jsonl(std::string_view text);
Corpus load_jsonl(const std::filesystem::path& path);

/// Returns the raw text of the given physical lines (ids must be sorted).
std::vector<std::string> read_lines(const std::filesystem::path& path, const IdSet& ids);

}  // namespace jxbw

#endif  // JXBW_CORPUS_HPP
