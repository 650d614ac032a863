#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pgt/store/value.hpp"

namespace pgt {

enum class NodeId : std::uint64_t {};
enum class RelId : std::uint64_t {};

constexpr std::uint64_t raw(NodeId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(RelId id) { return static_cast<std::uint64_t>(id); }

using ItemRef = std::variant<NodeId, RelId>;
using LabelSet = std::set<std::string>;
using PropertyMap = std::map<std::string, Value>;

struct Node {
  NodeId id{};
  LabelSet labels;
  PropertyMap properties;

  bool operator==(const Node&) const = default;
};

struct Relationship {
  RelId id{};
  std::string type;
  NodeId source{};
  NodeId target{};
  PropertyMap properties;

  bool operator==(const Relationship&) const = default;
};

enum class DeltaKind {
  kCreatedNode,
  kCreatedRel,
  kDeletedNode,
  kDeletedRel,
  kAssignedLabel,
  kRemovedLabel,
  kAssignedNodeProperty,
  kAssignedRelProperty,
  kRemovedNodeProperty,
  kRemovedRelProperty,
};

std::string_view to_string(DeltaKind kind);

/// One captured change. Creation and deletion records carry the full item
/// image (labels folded into the node-creation record); the remaining kinds
/// carry the labels (or relationship type) the item had when it changed.
struct DeltaRecord {
  DeltaKind kind = DeltaKind::kCreatedNode;
  std::uint64_t item = 0;
  std::string label;
  std::string key;
  std::optional<Value> old_value;
  std::optional<Value> new_value;
  std::uint64_t sequence = 0;
  int depth = 0;

  LabelSet labels;
  PropertyMap properties;
  std::string type;
  NodeId source{};
  NodeId target{};

  bool is_node() const;
  ItemRef ref() const;

  bool operator==(const DeltaRecord&) const = default;
};

struct ChangeSet {
  std::vector<DeltaRecord> records;
  std::uint64_t statement_id = 0;
  int depth = 0;

  bool empty() const { return records.empty(); }
};

enum class GraphErrc {
  kClosedTransaction,
  kNestedTransaction,
  kTransactionFailed,
  kDanglingEndpoint,
  kUnknownItem,
  kHasRelationships,
  kAbsentLabel,
  kAbsentProperty,
  kIdCollision,
  kMalformedSnapshot,
};

std::string_view to_string(GraphErrc code);

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GraphErrc code() const { return code_; }

 private:
  GraphErrc code_;
};

/// In-memory property graph with a single open transaction at a time. Every
/// mutation appends a DeltaRecord to the transaction log; rollback undoes the
/// log in reverse.
class PropertyGraph {
 public:
  enum class LabelOp { kAdd, kRemove };
  enum class PropertyOp { kSet, kRemove };

  const Node* node(NodeId id) const;
  const Relationship* relationship(RelId id) const;
  bool contains(ItemRef item) const;
  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<RelId, Relationship>& relationships() const { return rels_; }
  const std::set<RelId>& incident(NodeId id) const;
  const PropertyMap* properties(ItemRef item) const;

  void begin();
  ChangeSet commit();
  void rollback();
  bool in_transaction() const { return open_; }
  bool failed() const { return failed_; }

  // Savepoints within the open transaction.
  std::size_t mark() const { return log_.size(); }
  void rollback_to(std::size_t mark);
  std::vector<DeltaRecord> records_since(std::size_t mark) const;
  const std::vector<DeltaRecord>& log() const { return log_; }

  // Depth stamped onto records appended from now on.
  void set_depth(int depth) { depth_ = depth; }
  int depth() const { return depth_; }

  NodeId create_node(LabelSet labels = {}, PropertyMap props = {});
  RelId create_relationship(std::string type, NodeId source, NodeId target,
                            PropertyMap props = {});
  void delete_item(ItemRef item, bool detach = false);
  void mutate_label(NodeId node, LabelOp op, const std::string& label);
  /// kSet with a null value removes the key when present and is a no-op
  /// otherwise; assigned-property records never carry a null new value.
  void mutate_property(ItemRef item, PropertyOp op, const std::string& key,
                       Value value = {});

  /// Re-applies records against the current state, keeping their ids and
  /// sequence numbers.
  void replay(const std::vector<DeltaRecord>& records);

  // Bulk loading outside any transaction (snapshot import).
  void insert_node(Node node);
  void insert_relationship(Relationship rel);

  bool operator==(const PropertyGraph& other) const {
    return nodes_ == other.nodes_ && rels_ == other.rels_;
  }

 private:
  void require_open() const;
  [[noreturn]] void fail(GraphErrc code, const std::string& what);
  DeltaRecord& push(DeltaRecord rec);
  void apply(const DeltaRecord& rec);
  void undo(const DeltaRecord& rec);
  void link(const Relationship& rel);
  void unlink(const Relationship& rel);
  PropertyMap* mutable_properties(ItemRef item);

  std::map<NodeId, Node> nodes_;
  std::map<RelId, Relationship> rels_;
  std::map<NodeId, std::set<RelId>> adjacency_;
  std::uint64_t next_node_ = 1;
  std::uint64_t next_rel_ = 1;
  std::uint64_t next_sequence_ = 1;
  bool open_ = false;
  bool failed_ = false;
  int depth_ = 0;
  std::vector<DeltaRecord> log_;
};

}  // namespace pgt
