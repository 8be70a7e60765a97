#include "jxbw/json_tree.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include <json.hpp>

#include "jxbw/error.hpp"

namespace jxbw {
namespace {

// Receives nodes in preorder: open(kind, text) ... close().
template <class Sink>
class TreeSaxHandler {
 public:
  explicit TreeSaxHandler(Sink& sink) : sink_(sink) {}

  bool null() { return scalar(LabelKind::null_literal, {}); }
  bool boolean(bool v) { return scalar(v ? LabelKind::true_literal : LabelKind::false_literal, {}); }
  bool number_integer(std::int64_t v) { return integer(v); }
  bool number_unsigned(std::uint64_t v) { return integer(v); }
  bool number_float(double v, const std::string&) { return scalar(LabelKind::number, canonical_number(v)); }
  bool string(std::string& s) { return scalar(LabelKind::string, s); }
  bool binary(nlohmann::json::binary_t&) { return false; }

  bool start_object(std::size_t) { return open_container(LabelKind::object); }
  bool end_object() { return close_container(); }
  bool start_array(std::size_t) { return open_container(LabelKind::array); }
  bool end_array() { return close_container(); }

  bool key(std::string& k) {
    sink_.open(LabelKind::key, k);
    open_is_key_.push_back(true);
    return true;
  }

  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
    error_ = "at byte " + std::to_string(position) + ": " + ex.what();
    return false;
  }

  const std::string& error() const { return error_; }
  std::optional<LabelKind> root_kind() const { return root_kind_; }

 private:
  template <class Int>
  bool integer(Int v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return scalar(LabelKind::number, std::string_view(buf, res.ptr));
  }

  bool open_container(LabelKind kind) {
    if (containers_ >= kMaxNestingDepth) {
      error_ = "nesting deeper than " + std::to_string(kMaxNestingDepth);
      return false;
    }
    if (!root_kind_) root_kind_ = kind;
    sink_.open(kind, {});
    open_is_key_.push_back(false);
    ++containers_;
    return true;
  }

  bool close_container() {
    sink_.close();
    open_is_key_.pop_back();
    --containers_;
    value_done();
    return true;
  }

  bool scalar(LabelKind kind, std::string_view text) {
    if (!root_kind_) root_kind_ = kind;
    sink_.open(kind, text);
    sink_.close();
    value_done();
    return true;
  }

  // A KEY node closes as soon as its single value is complete.
  void value_done() {
    if (!open_is_key_.empty() && open_is_key_.back()) {
      sink_.close();
      open_is_key_.pop_back();
    }
  }

  Sink& sink_;
  std::vector<bool> open_is_key_;
  std::size_t containers_ = 0;
  std::optional<LabelKind> root_kind_;
  std::string error_;
};

struct PoolSink {
  LabelPool& pool;
  FlatTree<LabelId>::Builder builder;
  void open(LabelKind kind, std::string_view text) { builder.open(pool.intern(kind, text)); }
  void close() { builder.close(); }
};

struct LabelSink {
  FlatTree<Label>::Builder builder;
  void open(LabelKind kind, std::string_view text) { builder.open(Label{kind, std::string(text)}); }
  void close() { builder.close(); }
};

template <class Sink>
void run_parser(std::string_view text, TreeSaxHandler<Sink>& handler) {
  bool ok = false;
  try {
    ok = nlohmann::json::sax_parse(text.begin(), text.end(), &handler);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::malformed_json, ex.what());
  }
  if (!ok) {
    throw Error(ErrorCode::malformed_json, handler.error().empty() ? "invalid JSON" : handler.error());
  }
}

template <class Tree>
void render_node(std::string& out, const Tree& tree, NodeId v, const auto& label_of) {
  const Label& label = label_of(tree.label(v));
  switch (label.kind) {
    case LabelKind::object: {
      out.push_back('{');
      bool first = true;
      for (NodeId c : tree.children(v)) {
        if (!first) out.push_back(',');
        first = false;
        render_node(out, tree, c, label_of);
      }
      out.push_back('}');
      return;
    }
    case LabelKind::array: {
      out.push_back('[');
      bool first = true;
      for (NodeId c : tree.children(v)) {
        if (!first) out.push_back(',');
        first = false;
        render_node(out, tree, c, label_of);
      }
      out.push_back(']');
      return;
    }
    case LabelKind::key: {
      out += json_quote(label.text);
      out.push_back(':');
      auto kids = tree.children(v);
      if (kids.size() == 1) {
        render_node(out, tree, kids[0], label_of);
      } else {
        out += "null";  // malformed key node; never produced by the parser
      }
      return;
    }
    case LabelKind::string: out += json_quote(label.text); return;
    case LabelKind::number: out += label.text; return;
    case LabelKind::true_literal: out += "true"; return;
    case LabelKind::false_literal: out += "false"; return;
    case LabelKind::null_literal: out += "null"; return;
  }
}

}  // namespace

std::string canonical_number(double value) {
  if (std::isfinite(value) && value == std::trunc(value) && std::fabs(value) < 9.2e18) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, static_cast<std::int64_t>(value));
    return std::string(buf, res.ptr);
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

JsonTree parse_jsonl_line(std::string_view text, TreeId line_no, LabelPool& pool) {
  PoolSink sink{pool, {}};
  TreeSaxHandler<PoolSink> handler(sink);
  run_parser(text, handler);
  if (handler.root_kind() != LabelKind::object) {
    throw Error(ErrorCode::not_an_object, "top-level value of line " + std::to_string(line_no) +
                                              " is not a JSON object");
  }
  return JsonTree(std::move(sink.builder).finish(), line_no);
}

QueryTree parse_query(std::string_view text) {
  LabelSink sink;
  TreeSaxHandler<LabelSink> handler(sink);
  run_parser(text, handler);
  return std::move(sink.builder).finish();
}

QueryTree to_query(const JsonTree& tree, const LabelPool& pool, NodeId root) {
  QueryTree::Builder builder;
  auto copy = [&](auto&& self, NodeId v) -> void {
    builder.open(pool[tree.label(v)]);
    for (NodeId c : tree.children(v)) self(self, c);
    builder.close();
  };
  if (!tree.empty()) copy(copy, root);
  return std::move(builder).finish();
}

std::string render_json(const QueryTree& tree, NodeId root) {
  std::string out;
  if (!tree.empty()) render_node(out, tree, root, [](const Label& l) -> const Label& { return l; });
  return out;
}

std::string render_json(const JsonTree& tree, const LabelPool& pool, NodeId root) {
  std::string out;
  if (!tree.empty()) render_node(out, tree, root, [&](LabelId id) -> const Label& { return pool[id]; });
  return out;
}

std::string json_quote(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out.push_back('"');
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (u < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", u);
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace jxbw
