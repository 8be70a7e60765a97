#ifndef JXBW_PIPELINE_HPP
#define JXBW_PIPELINE_HPP

#include "jxbw/corpus.hpp"
#include "jxbw/merged_tree.hpp"
#include "jxbw/symbol_table.hpp"
#include "jxbw/xbw_index.hpp"

namespace jxbw {

struct BuildReport {
  MergeStats merge;
  std::size_t sigma = 0;
  double merge_ms = 0;
  double normalize_ms = 0;
  double xbw_ms = 0;
};

/// merge_all -> symbol table -> normalize -> build_xbw.
XbwIndex build_index(const Corpus& corpus, SymbolOrder order = SymbolOrder::label, BuildReport* report = nullptr);

}  // namespace jxbw

#endif  // JXBW_PIPELINE_HPP
