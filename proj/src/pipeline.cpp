#include "jxbw/pipeline.hpp"

#include <chrono>

namespace jxbw {
namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

XbwIndex build_index(const Corpus& corpus, SymbolOrder order, BuildReport* report) {
  auto t0 = std::chrono::steady_clock::now();
  MergedTree mt = merge_all(corpus.trees, corpus.labels);
  const double merge_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  SymbolTable table = build_symbol_table(mt, corpus.labels, order);
  NormalizedTree nt = normalize(mt, corpus.labels, table);
  const double normalize_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  XbwIndex index = build_xbw(nt, mt, std::move(table));
  if (report) {
    report->merge = merge_stats(mt, corpus.trees);
    report->sigma = index.sigma();
    report->merge_ms = merge_ms;
    report->normalize_ms = normalize_ms;
    report->xbw_ms = ms_since(t0);
  }
  return index;
}

}  // namespace jxbw
