#include "pgt/gql/datum.hpp"

#include <stdexcept>

#include "pgt/gql/printer.hpp"

namespace pgt::gql {

ItemImage ItemImage::of(const Node& n) {
  ItemImage img;
  img.is_node = true;
  img.id = raw(n.id);
  img.labels = n.labels;
  img.properties = n.properties;
  return img;
}

ItemImage ItemImage::of(const Relationship& r) {
  ItemImage img;
  img.is_node = false;
  img.id = raw(r.id);
  img.type = r.type;
  img.source = r.source;
  img.target = r.target;
  img.properties = r.properties;
  return img;
}

ItemImage ItemImage::from_record(const DeltaRecord& rec) {
  ItemImage img;
  img.is_node = rec.is_node();
  img.id = rec.item;
  img.labels = rec.labels;
  img.type = rec.type;
  img.source = rec.source;
  img.target = rec.target;
  img.properties = rec.properties;
  return img;
}

Datum Datum::from_value(const Value& v) {
  const auto& s = v.storage();
  if (v.is_null()) return {};
  if (v.is_text()) return v.text();
  if (v.is_integer()) return v.integer();
  if (v.is_float()) return v.floating();
  if (v.is_bool()) return v.boolean();
  if (v.is_datetime()) return v.datetime();
  DatumList out;
  for (const auto& t : std::get<TextList>(s)) out.emplace_back(t);
  return out;
}

bool Datum::item_is_node() const {
  if (is_node()) return true;
  if (is_image()) return image().is_node;
  return false;
}

std::uint64_t Datum::item_id() const {
  if (is_node()) return raw(node());
  if (is_rel()) return raw(rel());
  if (is_image()) return image().id;
  throw std::invalid_argument("not a graph item");
}

Value Datum::to_value() const {
  struct Visitor {
    Value operator()(std::monostate) const { return {}; }
    Value operator()(bool b) const { return b; }
    Value operator()(std::int64_t i) const { return i; }
    Value operator()(double d) const { return d; }
    Value operator()(const std::string& s) const { return s; }
    Value operator()(DateTime t) const { return t; }
    Value operator()(NodeId) const { throw std::invalid_argument("a node cannot be stored as a property"); }
    Value operator()(RelId) const {
      throw std::invalid_argument("a relationship cannot be stored as a property");
    }
    Value operator()(const std::shared_ptr<const ItemImage>&) const {
      throw std::invalid_argument("a graph item cannot be stored as a property");
    }
    Value operator()(const std::shared_ptr<const DatumList>& l) const {
      TextList out;
      for (const auto& e : *l) {
        if (!e.is_text()) throw std::invalid_argument("list properties hold strings only");
        out.push_back(e.text());
      }
      return out;
    }
  };
  return std::visit(Visitor{}, v_);
}

namespace {

int rank(const Datum& d) {
  if (d.is_bool()) return 0;
  if (d.is_number()) return 1;
  if (d.is_text()) return 2;
  if (d.is_datetime()) return 3;
  if (d.is_item()) return d.item_is_node() ? 4 : 5;
  if (d.is_list()) return 6;
  return 7;
}

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

int compare(const Datum& a, const Datum& b) {
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0: return three_way(a.boolean(), b.boolean());
    case 1:
      if (a.is_integer() && b.is_integer()) return three_way(a.integer(), b.integer());
      return three_way(a.number(), b.number());
    case 2: return three_way(a.text(), b.text());
    case 3: return three_way(a.datetime().micros, b.datetime().micros);
    case 4:
    case 5: return three_way(a.item_id(), b.item_id());
    case 6: {
      const auto& la = a.list();
      const auto& lb = b.list();
      for (std::size_t i = 0; i < la.size() && i < lb.size(); ++i) {
        if (int c = compare(la[i], lb[i])) return c;
      }
      return three_way(la.size(), lb.size());
    }
    default: return 0;
  }
}

std::string render(const Datum& d) {
  if (d.is_null()) return "null";
  if (d.is_text()) return quote_string(d.text(), '\'');
  if (d.is_node()) return "node#" + std::to_string(raw(d.node()));
  if (d.is_rel()) return "rel#" + std::to_string(raw(d.rel()));
  if (d.is_image()) {
    return (d.image().is_node ? "node#" : "rel#") + std::to_string(d.image().id);
  }
  if (d.is_list()) {
    std::string r = "[";
    for (std::size_t i = 0; i < d.list().size(); ++i) {
      if (i) r += ", ";
      r += render(d.list()[i]);
    }
    return r + "]";
  }
  if (d.is_datetime()) return format_rfc3339(d.datetime());
  return to_cypher(Expr::lit(d.to_value()));
}

bool contains_item(const Datum& set, bool is_node, std::uint64_t id) {
  if (set.is_item()) return set.item_is_node() == is_node && set.item_id() == id;
  if (set.is_list()) {
    for (const auto& e : set.list()) {
      if (contains_item(e, is_node, id)) return true;
    }
  }
  return false;
}

}  // namespace pgt::gql
