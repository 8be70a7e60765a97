#ifndef JXBW_LABEL_HPP
#define JXBW_LABEL_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jxbw {

// Declaration order is the label order.
enum class LabelKind : std::uint8_t {
  object,
  array,
  key,
  string,
  number,
  true_literal,
  false_literal,
  null_literal,
};

std::string_view kind_name(LabelKind kind) noexcept;

/// Node label of a JSON tree. `text` holds the key name for keys and the
/// canonical lexeme for strings and numbers; it is empty otherwise.
struct Label {
  LabelKind kind = LabelKind::object;
  std::string text;

  static Label object() { return {LabelKind::object, {}}; }
  static Label array() { return {LabelKind::array, {}}; }
  static Label key(std::string name) { return {LabelKind::key, std::move(name)}; }
  static Label string(std::string value) { return {LabelKind::string, std::move(value)}; }
  static Label number(std::string lexeme) { return {LabelKind::number, std::move(lexeme)}; }
  static Label boolean(bool v) { return {v ? LabelKind::true_literal : LabelKind::false_literal, {}}; }
  static Label null() { return {LabelKind::null_literal, {}}; }

  bool is_container() const noexcept { return kind == LabelKind::object || kind == LabelKind::array; }

  friend bool operator==(const Label&, const Label&) = default;
  // std::string compares through char_traits<char>, i.e. unsigned byte order.
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    int r = a.text.compare(b.text);
    return r < 0 ? std::strong_ordering::less
                 : (r > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
};

/// Human-readable rendering, e.g. `Object`, `"name"`, `'Alice'`, `30`.
std::string to_display(const Label& label);

using LabelId = std::uint32_t;

/// Interns labels so corpus trees can refer to them by a 32-bit id. Ids are
/// assigned in first-seen order and carry no ordering meaning.
class LabelPool {
 public:
  LabelId intern(LabelKind kind, std::string_view text);
  LabelId intern(const Label& label) { return intern(label.kind, label.text); }
  std::optional<LabelId> find(const Label& label) const;

  const Label& operator[](LabelId id) const { return labels_[id]; }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  static std::string make_key(LabelKind kind, std::string_view text);

  std::vector<Label> labels_;
  std::unordered_map<std::string, LabelId> index_;
};

}  // namespace jxbw

#endif  // JXBW_LABEL_HPP
