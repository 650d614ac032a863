#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pgt/store/graph.hpp"

namespace pgt::gql {

/// Frozen copy of a node or relationship: used for OLD states and for items
/// that no longer (or do not yet) exist in the graph.
struct ItemImage {
  bool is_node = true;
  std::uint64_t id = 0;
  LabelSet labels;
  std::string type;
  NodeId source{};
  NodeId target{};
  PropertyMap properties;

  static ItemImage of(const Node& n);
  static ItemImage of(const Relationship& r);
  /// Image of the pre-state recorded in a deletion record.
  static ItemImage from_record(const DeltaRecord& rec);
};

class Datum;
using DatumList = std::vector<Datum>;

/// A runtime value: a property value, a graph item, an image, or a list.
class Datum {
 public:
  using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, DateTime,
                               NodeId, RelId, std::shared_ptr<const ItemImage>,
                               std::shared_ptr<const DatumList>>;

  Datum() = default;
  Datum(bool v) : v_(v) {}
  Datum(std::int64_t v) : v_(v) {}
  Datum(int v) : v_(static_cast<std::int64_t>(v)) {}
  Datum(double v) : v_(v) {}
  Datum(std::string v) : v_(std::move(v)) {}
  Datum(const char* v) : v_(std::string(v)) {}
  Datum(DateTime v) : v_(v) {}
  Datum(NodeId v) : v_(v) {}
  Datum(RelId v) : v_(v) {}
  Datum(ItemImage image) : v_(std::make_shared<const ItemImage>(std::move(image))) {}
  Datum(DatumList list) : v_(std::make_shared<const DatumList>(std::move(list))) {}

  static Datum from_value(const Value& v);

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_number() const { return is_integer() || is_float(); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_datetime() const { return std::holds_alternative<DateTime>(v_); }
  bool is_node() const { return std::holds_alternative<NodeId>(v_); }
  bool is_rel() const { return std::holds_alternative<RelId>(v_); }
  bool is_image() const { return std::holds_alternative<std::shared_ptr<const ItemImage>>(v_); }
  bool is_list() const { return std::holds_alternative<std::shared_ptr<const DatumList>>(v_); }

  bool boolean() const { return std::get<bool>(v_); }
  std::int64_t integer() const { return std::get<std::int64_t>(v_); }
  double floating() const { return std::get<double>(v_); }
  double number() const { return is_integer() ? static_cast<double>(integer()) : floating(); }
  const std::string& text() const { return std::get<std::string>(v_); }
  DateTime datetime() const { return std::get<DateTime>(v_); }
  NodeId node() const { return std::get<NodeId>(v_); }
  RelId rel() const { return std::get<RelId>(v_); }
  const ItemImage& image() const { return *std::get<std::shared_ptr<const ItemImage>>(v_); }
  const DatumList& list() const { return *std::get<std::shared_ptr<const DatumList>>(v_); }

  /// Item identity for nodes, relationships and images.
  bool is_item() const { return is_node() || is_rel() || is_image(); }
  bool item_is_node() const;
  std::uint64_t item_id() const;

  /// Converts to a storable property value; throws std::invalid_argument for
  /// items and non-text lists.
  Value to_value() const;

  const Storage& storage() const { return v_; }

 private:
  Storage v_;
};

/// Total order used for ORDER BY, grouping and distinct counting. Numbers
/// compare across integer/float; items compare by kind then id; null sorts
/// last.
int compare(const Datum& a, const Datum& b);
inline bool operator==(const Datum& a, const Datum& b) { return compare(a, b) == 0; }
inline bool operator<(const Datum& a, const Datum& b) { return compare(a, b) < 0; }

/// Human-readable rendering for reports (strings quoted).
std::string render(const Datum& d);

/// True when `item` is `set` itself or an element of it (by item identity).
bool contains_item(const Datum& set, bool is_node, std::uint64_t id);

using Row = std::map<std::string, Datum>;

}  // namespace pgt::gql
