#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jxbw/baseline_search.hpp"
#include "jxbw/corpus.hpp"
#include "jxbw/error.hpp"
#include "jxbw/pipeline.hpp"
#include "jxbw/substructure_engine.hpp"
#include "jxbw/synthetic.hpp"
#include "jxbw/xbw_index.hpp"

namespace jxbw::cli {
namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

enum class Algorithm { xbw, mt, naive };

const std::map<std::string, Algorithm> kAlgorithms{
    {"xbw", Algorithm::xbw}, {"mt", Algorithm::mt}, {"naive", Algorithm::naive}};

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::xbw: return "xbw";
    case Algorithm::mt: return "mt";
    case Algorithm::naive: return "naive";
  }
  return "?";
}

struct NamedQuery {
  std::string text;
  QueryTree tree;
};

NamedQuery parse_query_text(std::string text, const std::string& where) {
  try {
    QueryTree q = parse_query(text);
    return {std::move(text), std::move(q)};
  } catch (const Error& e) {
    throw Error(ErrorCode::bad_query, where + ": " + e.detail());
  }
}

std::vector<NamedQuery> read_queries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<NamedQuery> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_query_text(line, path.string() + " line " + std::to_string(line_no)));
  }
  return out;
}

void require_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorCode::io, "no such file: " + path.string());
}

/// The three searchers over one corpus; baselines reparse the JSONL.
class Searchers {
 public:
  Searchers(const std::string& index_path, const std::string& jsonl_path, bool need_baselines) {
    require_file(index_path);
    if (need_baselines) {
      if (jsonl_path.empty()) {
        throw Error(ErrorCode::missing_jsonl_for_baseline, "mt and naive search need --jsonl <corpus>");
      }
      corpus_ = load_jsonl(jsonl_path);
    }
    index_path_ = index_path;
  }

  ResultSet run(Algorithm a, const QueryTree& q, QueryStats* stats = nullptr) {
    switch (a) {
      case Algorithm::xbw: return engine().search(q, stats);
      case Algorithm::mt: return mt_searcher().search(q);
      case Algorithm::naive: return naive_search(corpus_->trees, corpus_->labels, q);
    }
    return {};
  }

  /// Loads lazily so timing never includes index load or merging.
  void prepare(Algorithm a) {
    if (a == Algorithm::xbw) engine();
    if (a == Algorithm::mt) mt_searcher();
  }

 private:
  SubstructureEngine& engine() {
    if (!engine_) {
      index_ = XbwIndex::load(index_path_);
      engine_.emplace(*index_);
    }
    return *engine_;
  }
  MergedTreeSearcher& mt_searcher() {
    if (!mt_searcher_) {
      mt_ = merge_all(corpus_->trees, corpus_->labels);
      mt_searcher_.emplace(*mt_, corpus_->labels);
    }
    return *mt_searcher_;
  }

  std::string index_path_;
  std::optional<Corpus> corpus_;
  std::optional<XbwIndex> index_;
  std::optional<SubstructureEngine> engine_;
  std::optional<MergedTree> mt_;
  std::optional<MergedTreeSearcher> mt_searcher_;
};

Json ids_json(const ResultSet& ids) {
  Json arr = Json::array();
  for (TreeId id : ids) arr.push_back(id);
  return arr;
}

std::string join_ids(const ResultSet& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ids[i]);
  }
  return s;
}

struct Summary {
  double mean = 0;
  double stddev = 0;
  double median = 0;
};

Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= double(v.size());
  for (double x : v) s.stddev += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(s.stddev / double(v.size() - 1)) : 0.0;
  std::sort(v.begin(), v.end());
  s.median = v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
  return s;
}

// ---------------------------------------------------------------- commands

struct BuildArgs {
  std::string input;
  std::string output;
  std::string order = "label";
  bool json = false;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const Corpus corpus = load_jsonl(a.input);
  const double parse_ms = ms_since(t0);
  BuildReport report;
  const auto t1 = Clock::now();
  const XbwIndex index = build_index(
      corpus, a.order == "first-occurrence" ? SymbolOrder::first_occurrence : SymbolOrder::label, &report);
  const double build_ms = ms_since(t1);
  const auto t2 = Clock::now();
  index.save(a.output);
  const double save_ms = ms_since(t2);
  const double total_ms = ms_since(t0);
  const auto bytes = std::filesystem::file_size(a.output);

  if (a.json) {
    Json j;
    j["lines"] = corpus.trees.size();
    j["total_nodes"] = report.merge.total_nodes;
    j["merged_nodes"] = report.merge.merged_nodes;
    j["merge_ratio"] = report.merge.ratio();
    j["sigma"] = report.sigma;
    j["index_nodes"] = index.size();
    j["index_bytes"] = bytes;
    j["phases_ms"] = {{"individual_trees", parse_ms},
                      {"merging_tree", report.merge_ms},
                      {"normalize", report.normalize_ms},
                      {"xbw", report.xbw_ms},
                      {"build", build_ms},
                      {"save", save_ms},
                      {"total", total_ms}};
    out << j.dump() << '\n';
    return kOk;
  }
  out << "lines           " << corpus.trees.size() << '\n'
      << "total nodes     " << report.merge.total_nodes << '\n'
      << "merged nodes    " << report.merge.merged_nodes << '\n'
      << "merge ratio     " << report.merge.ratio() << '\n'
      << "sigma           " << report.sigma << '\n'
      << "index nodes     " << index.size() << '\n'
      << "index bytes     " << bytes << '\n'
      << std::fixed << std::setprecision(2)
      << "individual trees ms  " << parse_ms << '\n'
      << "merging tree ms      " << report.merge_ms << '\n'
      << "normalize ms         " << report.normalize_ms << '\n'
      << "xbw ms               " << report.xbw_ms << '\n'
      << "save ms              " << save_ms << '\n'
      << "total ms             " << total_ms << '\n';
  return kOk;
}

struct QueryArgs {
  std::string index;
  std::string query;
  std::string jsonl;
  std::string algorithm = "xbw";
  std::string format = "ids";
};

int cmd_query(const QueryArgs& a, std::ostream& out) {
  const Algorithm algo = kAlgorithms.at(a.algorithm);
  const NamedQuery q = parse_query_text(a.query, "query");
  if (a.format == "lines" && a.jsonl.empty()) {
    throw Error(ErrorCode::missing_jsonl_for_baseline, "--format lines needs --jsonl <corpus>");
  }
  Searchers s(a.index, a.jsonl, algo != Algorithm::xbw);
  s.prepare(algo);
  const auto t0 = Clock::now();
  const ResultSet ids = s.run(algo, q.tree);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();

  if (a.format == "count") {
    out << ids.size() << '\n';
  } else if (a.format == "ids") {
    for (TreeId id : ids) out << id << '\n';
  } else if (a.format == "lines") {
    for (const auto& line : read_lines(a.jsonl, ids)) out << line << '\n';
  } else {
    Json j;
    j["query"] = Json::parse(q.text);
    j["ids"] = ids_json(ids);
    j["count"] = ids.size();
    j["elapsed_micros"] = micros;
    j["algorithm"] = a.algorithm;
    out << j.dump() << '\n';
  }
  return kOk;
}

struct VerifyArgs {
  std::string index;
  std::string jsonl;
  std::string queries;
  std::size_t random = 0;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  Searchers s(a.index, a.jsonl, true);
  std::vector<NamedQuery> queries;
  if (!a.queries.empty()) {
    queries = read_queries(a.queries);
  } else {
    const Corpus corpus = load_jsonl(a.jsonl);
    synthetic::QuerySampler sampler(corpus, a.seed);
    for (std::size_t i = 0; i < a.random; ++i) {
      auto q = sampler.sample();
      if (!q) break;
      queries.push_back({render_json(*q), std::move(*q)});
    }
  }
  if (queries.empty()) {
    err << "warning: no queries; agreement holds vacuously\n";
    out << "queries 0\nPASS\n";
    return kOk;
  }

  std::size_t xm = 0, xn = 0, mn = 0;
  std::vector<std::string> failures;
  for (const auto& q : queries) {
    const ResultSet x = s.run(Algorithm::xbw, q.tree);
    const ResultSet m = s.run(Algorithm::mt, q.tree);
    const ResultSet n = s.run(Algorithm::naive, q.tree);
    xm += x == m;
    xn += x == n;
    mn += m == n;
    if (x != m || x != n) {
      failures.push_back(q.text + " xbw=[" + join_ids(x) + "] mt=[" + join_ids(m) + "] naive=[" + join_ids(n) + "]");
    }
  }
  const std::size_t k = queries.size();
  out << "queries " << k << '\n'
      << "            mt      naive\n"
      << "xbw   " << std::setw(8) << xm << "   " << std::setw(8) << xn << '\n'
      << "mt    " << std::setw(8) << "" << "   " << std::setw(8) << mn << '\n';
  if (failures.empty()) {
    out << "PASS\n";
    return kOk;
  }
  out << "FAIL\n";
  for (const auto& f : failures) err << "DISAGREEMENT: " << f << '\n';
  return kDisagreement;
}

struct BenchArgs {
  std::string index;
  std::string jsonl;
  std::string queries;
  std::size_t repeat = 1;
  std::vector<std::string> algorithms{"xbw", "mt", "naive"};
  std::string format = "text";
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<Algorithm> algos;
  for (const auto& name : a.algorithms) algos.push_back(kAlgorithms.at(name));
  const bool baselines = std::any_of(algos.begin(), algos.end(), [](Algorithm x) { return x != Algorithm::xbw; });
  Searchers s(a.index, a.jsonl, baselines);
  const auto queries = read_queries(a.queries);

  struct Row {
    Algorithm algo;
    Summary ms;
    double hits = 0;
    double p = 0, r = 0, c = 0;
  };
  std::vector<Row> rows;
  for (Algorithm algo : algos) {
    s.prepare(algo);
    Row row{algo, {}};
    std::vector<double> per_query;
    std::size_t hits = 0;
    for (const auto& q : queries) {
      double total = 0;
      for (std::size_t rep = 0; rep < a.repeat; ++rep) {
        QueryStats st;
        const auto t0 = Clock::now();
        const ResultSet ids = s.run(algo, q.tree, &st);
        total += ms_since(t0);
        if (rep == 0) {
          hits += ids.size();
          row.p += double(st.p);
          row.r += double(st.r);
          row.c += double(st.c);
        }
      }
      per_query.push_back(total / double(a.repeat));
    }
    row.ms = summarize(per_query);
    const double k = queries.empty() ? 1.0 : double(queries.size());
    row.hits = double(hits) / k;
    row.p /= k;
    row.r /= k;
    row.c /= k;
    rows.push_back(row);
  }

  const Row* xbw = nullptr;
  for (const auto& r : rows) {
    if (r.algo == Algorithm::xbw) xbw = &r;
  }
  auto speedup = [&](const Row& r) -> std::optional<double> {
    if (!xbw || xbw->ms.mean <= 0) return std::nullopt;
    return r.ms.mean / xbw->ms.mean;
  };

  if (a.format == "json") {
    Json j;
    j["queries"] = queries.size();
    j["repeat"] = a.repeat;
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json e;
      e["algorithm"] = algorithm_name(r.algo);
      e["mean_ms"] = r.ms.mean;
      e["stddev_ms"] = r.ms.stddev;
      e["median_ms"] = r.ms.median;
      e["avg_hits"] = r.hits;
      if (auto sp = speedup(r)) e["speedup_vs_xbw"] = *sp;
      if (r.algo == Algorithm::xbw) e["stats"] = {{"mean_p", r.p}, {"mean_r", r.r}, {"mean_c", r.c}};
      arr.push_back(e);
    }
    j["results"] = arr;
    out << j.dump() << '\n';
    return kOk;
  }
  out << "queries " << queries.size() << "  repeat " << a.repeat << '\n';
  out << std::left << std::setw(8) << "algo" << std::right << std::setw(14) << "mean ms" << std::setw(12) << "stddev"
      << std::setw(12) << "median" << std::setw(12) << "avg hits" << std::setw(12) << "vs xbw" << '\n';
  out << std::fixed;
  for (const auto& r : rows) {
    out << std::left << std::setw(8) << algorithm_name(r.algo) << std::right << std::setprecision(4) << std::setw(14)
        << r.ms.mean << std::setw(12) << r.ms.stddev << std::setw(12) << r.ms.median << std::setprecision(2)
        << std::setw(12) << r.hits;
    if (auto sp = speedup(r)) {
      out << std::setw(11) << *sp << 'x';
    } else {
      out << std::setw(12) << "-";
    }
    out << '\n';
  }
  if (xbw) {
    out << std::setprecision(2) << "xbw mean p " << xbw->p << "  r " << xbw->r << "  c " << xbw->c << '\n';
  }
  return kOk;
}

struct StatsArgs {
  std::string index;
  bool json = false;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  require_file(a.index);
  const XbwIndex x = XbwIndex::load(a.index);
  const SectionSizes s = x.section_sizes();
  const auto file_bytes = std::filesystem::file_size(a.index);
  std::uint64_t label_text = 0;
  for (Symbol c = 1; c <= x.sigma(); ++c) label_text += x.symbols().label(c).text.size();
  const std::uint64_t succinct_bytes = s.a_last + s.a_leaf + s.a_diff + s.a_label + s.a_pf + s.f_table;
  const std::uint64_t id_bytes = s.ids + s.residual_ids + s.array_positions;
  const double n = double(std::max<std::uint64_t>(1, x.size()));

  const std::vector<std::pair<const char*, std::uint64_t>> sections{
      {"header", s.header}, {"symbols", s.symbols}, {"a_last", s.a_last},
      {"a_leaf", s.a_leaf}, {"a_diff", s.a_diff},   {"a_label", s.a_label},
      {"a_pf", s.a_pf},     {"f_table", s.f_table}, {"ids", s.ids},
      {"residual_ids", s.residual_ids}, {"array_positions", s.array_positions}, {"checksum", s.checksum}};

  if (a.json) {
    Json j;
    j["nodes"] = x.size();
    j["sigma"] = x.sigma();
    j["leaves"] = x.leaf_count();
    j["file_bytes"] = file_bytes;
    Json sec;
    for (const auto& [name, bytes] : sections) sec[name] = bytes;
    j["sections"] = sec;
    j["symbol_table_bytes"] = s.symbols;
    j["label_text_bytes"] = label_text;
    j["succinct_bytes"] = succinct_bytes;
    j["id_bytes"] = id_bytes;
    j["succinct_bits_per_node"] = 8.0 * double(succinct_bytes) / n;
    out << j.dump() << '\n';
    return kOk;
  }
  out << "nodes           " << x.size() << '\n'
      << "sigma           " << x.sigma() << '\n'
      << "leaves          " << x.leaf_count() << '\n'
      << "file bytes      " << file_bytes << '\n'
      << "sections\n";
  for (const auto& [name, bytes] : sections) out << "  " << std::left << std::setw(16) << name << bytes << '\n';
  out << std::right << std::fixed << std::setprecision(2)
      << "symbol table bytes  " << s.symbols << "  (label text " << label_text << ")\n"
      << "succinct bytes      " << succinct_bytes << "  (" << 8.0 * double(succinct_bytes) / n << " bits/node)\n"
      << "id bytes            " << id_bytes << '\n';
  return kOk;
}

struct GenerateArgs {
  std::string kind = "schema";
  std::size_t lines = 1000;
  std::uint64_t seed = 1;
  std::string output;
};

int write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::io, "write failed: " + path);
  return kOk;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  std::vector<std::string> lines;
  if (a.kind == "schema") {
    lines = synthetic::schema_lines(a.lines, a.seed);
  } else if (a.kind == "mixed") {
    lines = synthetic::mixed_lines(a.lines, a.seed);
  } else {
    lines = synthetic::disjoint_lines(a.lines, a.seed);
  }
  return write_text(a.output, synthetic::join_lines(lines), out);
}

struct SampleArgs {
  std::string jsonl;
  std::size_t count = 100;
  std::size_t misses = 0;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const Corpus corpus = load_jsonl(a.jsonl);
  synthetic::QuerySampler sampler(corpus, a.seed);
  std::string text;
  for (std::size_t i = 0; i < a.count; ++i) {
    auto q = sampler.sample();
    if (!q) break;
    text += render_json(*q) + '\n';
  }
  for (std::size_t i = 0; i < a.misses; ++i) {
    auto q = sampler.sample_miss();
    if (!q) break;
    text += render_json(*q) + '\n';
  }
  return write_text(a.output, text, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Substructure search over JSONL with a succinct XBW index", "jxbw"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "jxbw 1.0");

  const auto algorithm_check = CLI::IsMember({"xbw", "mt", "naive"});

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build an index from a JSONL file");
  b->add_option("input", build.input, "JSONL corpus")->required();
  b->add_option("-o,--output", build.output, "Index file to write")->required();
  b->add_option("--order", build.order, "Symbol order")->check(CLI::IsMember({"label", "first-occurrence"}));
  b->add_flag("--json", build.json, "Print the report as JSON");

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Find the lines containing a JSON substructure");
  q->add_option("index", query.index, "Index file")->required();
  q->add_option("-q,--query", query.query, "Query JSON")->required();
  q->add_option("--jsonl", query.jsonl, "Original corpus (baselines and --format lines)");
  q->add_option("--algorithm", query.algorithm, "xbw, mt or naive")->check(algorithm_check);
  q->add_option("--format", query.format, "ids, count, lines or json")
      ->check(CLI::IsMember({"ids", "count", "lines", "json"}));

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check that all three algorithms agree");
  v->add_option("index", verify.index, "Index file")->required();
  v->add_option("--jsonl", verify.jsonl, "Original corpus")->required();
  auto* vq = v->add_option("--queries", verify.queries, "JSONL file of queries");
  auto* vr = v->add_option("--random", verify.random, "Number of sampled queries");
  v->add_option("--seed", verify.seed, "Sampling seed");
  vq->excludes(vr);

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "Measure per-query latency");
  be->add_option("index", bench.index, "Index file")->required();
  be->add_option("--jsonl", bench.jsonl, "Original corpus (needed for mt and naive)");
  be->add_option("--queries", bench.queries, "JSONL file of queries")->required();
  be->add_option("--repeat", bench.repeat, "Repeats per query")->check(CLI::PositiveNumber);
  be->add_option("--algorithms", bench.algorithms, "Comma-separated subset of xbw,mt,naive")
      ->delimiter(',')
      ->check(algorithm_check);
  be->add_option("--format", bench.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  StatsArgs stats;
  auto* st = app.add_subcommand("stats", "Print index size statistics");
  st->add_option("index", stats.index, "Index file")->required();
  st->add_flag("--json", stats.json, "Print as JSON");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic JSONL corpus");
  g->add_option("--kind", gen.kind, "schema, mixed or disjoint")
      ->check(CLI::IsMember({"schema", "mixed", "disjoint"}));
  g->add_option("--lines", gen.lines, "Number of lines");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("-o,--output", gen.output, "Output file (default stdout)");

  SampleArgs sample;
  auto* sa = app.add_subcommand("sample", "Write random queries that occur in a corpus");
  sa->add_option("--jsonl", sample.jsonl, "Corpus to sample from")->required();
  sa->add_option("--count", sample.count, "Queries guaranteed to hit");
  sa->add_option("--misses", sample.misses, "Additional queries guaranteed to miss");
  sa->add_option("--seed", sample.seed, "Sampling seed");
  sa->add_option("-o,--output", sample.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*b) return cmd_build(build, out);
    if (*q) return cmd_query(query, out);
    if (*v) {
      if (vq->count() == 0 && vr->count() == 0) {
        err << "verify: one of --queries or --random is required\n";
        return kUsage;
      }
      return cmd_verify(verify, out, err);
    }
    if (*be) return cmd_bench(bench, out);
    if (*st) return cmd_stats(stats, out);
    if (*g) return cmd_generate(gen, out);
    if (*sa) return cmd_sample(sample, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: IO: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace jxbw::cli
