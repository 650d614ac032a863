#include "pgt/store/graph.hpp"

#include <algorithm>

namespace pgt {

namespace {

const std::set<RelId> kNoRels;

std::string item_name(ItemRef item) {
  if (const auto* n = std::get_if<NodeId>(&item)) return "node " + std::to_string(raw(*n));
  return "relationship " + std::to_string(raw(std::get<RelId>(item)));
}

}  // namespace

std::string_view to_string(DeltaKind kind) {
  switch (kind) {
    case DeltaKind::kCreatedNode: return "created-node";
    case DeltaKind::kCreatedRel: return "created-rel";
    case DeltaKind::kDeletedNode: return "deleted-node";
    case DeltaKind::kDeletedRel: return "deleted-rel";
    case DeltaKind::kAssignedLabel: return "assigned-label";
    case DeltaKind::kRemovedLabel: return "removed-label";
    case DeltaKind::kAssignedNodeProperty: return "assigned-node-property";
    case DeltaKind::kAssignedRelProperty: return "assigned-rel-property";
    case DeltaKind::kRemovedNodeProperty: return "removed-node-property";
    case DeltaKind::kRemovedRelProperty: return "removed-rel-property";
  }
  return "?";
}

std::string_view to_string(GraphErrc code) {
  switch (code) {
    case GraphErrc::kClosedTransaction: return "closed-transaction";
    case GraphErrc::kNestedTransaction: return "nested-transaction";
    case GraphErrc::kTransactionFailed: return "transaction-failed";
    case GraphErrc::kDanglingEndpoint: return "dangling-endpoint";
    case GraphErrc::kUnknownItem: return "unknown-item";
    case GraphErrc::kHasRelationships: return "has-relationships";
    case GraphErrc::kAbsentLabel: return "absent-label";
    case GraphErrc::kAbsentProperty: return "absent-property";
    case GraphErrc::kIdCollision: return "id-collision";
    case GraphErrc::kMalformedSnapshot: return "malformed-snapshot";
  }
  return "?";
}

bool DeltaRecord::is_node() const {
  switch (kind) {
    case DeltaKind::kCreatedRel:
    case DeltaKind::kDeletedRel:
    case DeltaKind::kAssignedRelProperty:
    case DeltaKind::kRemovedRelProperty:
      return false;
    default:
      return true;
  }
}

ItemRef DeltaRecord::ref() const {
  if (is_node()) return NodeId{item};
  return RelId{item};
}

// ---------------------------------------------------------------------------
// Reads

const Node* PropertyGraph::node(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Relationship* PropertyGraph::relationship(RelId id) const {
  auto it = rels_.find(id);
  return it == rels_.end() ? nullptr : &it->second;
}

bool PropertyGraph::contains(ItemRef item) const {
  if (const auto* n = std::get_if<NodeId>(&item)) return nodes_.count(*n) != 0;
  return rels_.count(std::get<RelId>(item)) != 0;
}

const std::set<RelId>& PropertyGraph::incident(NodeId id) const {
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? kNoRels : it->second;
}

const PropertyMap* PropertyGraph::properties(ItemRef item) const {
  if (const auto* n = std::get_if<NodeId>(&item)) {
    const Node* node = this->node(*n);
    return node ? &node->properties : nullptr;
  }
  const Relationship* rel = relationship(std::get<RelId>(item));
  return rel ? &rel->properties : nullptr;
}

PropertyMap* PropertyGraph::mutable_properties(ItemRef item) {
  if (const auto* n = std::get_if<NodeId>(&item)) {
    auto it = nodes_.find(*n);
    return it == nodes_.end() ? nullptr : &it->second.properties;
  }
  auto it = rels_.find(std::get<RelId>(item));
  return it == rels_.end() ? nullptr : &it->second.properties;
}

// ---------------------------------------------------------------------------
// Transactions

void PropertyGraph::begin() {
  if (open_) throw GraphError(GraphErrc::kNestedTransaction, "transaction already open");
  open_ = true;
  failed_ = false;
  depth_ = 0;
  log_.clear();
}

ChangeSet PropertyGraph::commit() {
  if (!open_) throw GraphError(GraphErrc::kClosedTransaction, "no open transaction");
  if (failed_) {
    throw GraphError(GraphErrc::kTransactionFailed,
                     "transaction failed; only rollback is allowed");
  }
  ChangeSet cs;
  cs.records = std::move(log_);
  log_.clear();
  open_ = false;
  return cs;
}

void PropertyGraph::rollback() {
  if (!open_) throw GraphError(GraphErrc::kClosedTransaction, "no open transaction");
  rollback_to(0);
  open_ = false;
  failed_ = false;
}

void PropertyGraph::rollback_to(std::size_t mark) {
  require_open();
  while (log_.size() > mark) {
    undo(log_.back());
    log_.pop_back();
  }
}

std::vector<DeltaRecord> PropertyGraph::records_since(std::size_t mark) const {
  if (mark >= log_.size()) return {};
  return {log_.begin() + static_cast<std::ptrdiff_t>(mark), log_.end()};
}

void PropertyGraph::require_open() const {
  if (!open_) throw GraphError(GraphErrc::kClosedTransaction, "no open transaction");
}

void PropertyGraph::fail(GraphErrc code, const std::string& what) {
  failed_ = true;
  throw GraphError(code, what);
}

DeltaRecord& PropertyGraph::push(DeltaRecord rec) {
  rec.sequence = next_sequence_++;
  rec.depth = depth_;
  log_.push_back(std::move(rec));
  return log_.back();
}

void PropertyGraph::link(const Relationship& rel) {
  adjacency_[rel.source].insert(rel.id);
  adjacency_[rel.target].insert(rel.id);
}

void PropertyGraph::unlink(const Relationship& rel) {
  for (NodeId end : {rel.source, rel.target}) {
    auto it = adjacency_.find(end);
    if (it == adjacency_.end()) continue;
    it->second.erase(rel.id);
    if (it->second.empty()) adjacency_.erase(it);
  }
}

// ---------------------------------------------------------------------------
// Mutations

NodeId PropertyGraph::create_node(LabelSet labels, PropertyMap props) {
  require_open();
  std::erase_if(props, [](const auto& kv) { return kv.second.is_null(); });
  NodeId id{next_node_++};
  nodes_.emplace(id, Node{id, labels, props});
  DeltaRecord rec;
  rec.kind = DeltaKind::kCreatedNode;
  rec.item = raw(id);
  rec.labels = std::move(labels);
  rec.properties = std::move(props);
  push(std::move(rec));
  return id;
}

RelId PropertyGraph::create_relationship(std::string type, NodeId source, NodeId target,
                                         PropertyMap props) {
  require_open();
  if (!node(source) || !node(target)) {
    fail(GraphErrc::kDanglingEndpoint,
         "relationship endpoint does not exist: " +
             std::to_string(raw(node(source) ? target : source)));
  }
  std::erase_if(props, [](const auto& kv) { return kv.second.is_null(); });
  RelId id{next_rel_++};
  Relationship rel{id, type, source, target, props};
  link(rel);
  rels_.emplace(id, std::move(rel));
  DeltaRecord rec;
  rec.kind = DeltaKind::kCreatedRel;
  rec.item = raw(id);
  rec.type = std::move(type);
  rec.source = source;
  rec.target = target;
  rec.properties = std::move(props);
  push(std::move(rec));
  return id;
}

void PropertyGraph::delete_item(ItemRef item, bool detach) {
  require_open();
  if (const auto* rid = std::get_if<RelId>(&item)) {
    auto it = rels_.find(*rid);
    if (it == rels_.end()) fail(GraphErrc::kUnknownItem, "unknown " + item_name(item));
    Relationship rel = std::move(it->second);
    unlink(rel);
    rels_.erase(it);
    DeltaRecord rec;
    rec.kind = DeltaKind::kDeletedRel;
    rec.item = raw(rel.id);
    rec.type = std::move(rel.type);
    rec.source = rel.source;
    rec.target = rel.target;
    rec.properties = std::move(rel.properties);
    push(std::move(rec));
    return;
  }

  NodeId nid = std::get<NodeId>(item);
  if (!node(nid)) fail(GraphErrc::kUnknownItem, "unknown " + item_name(item));
  const auto& rels = incident(nid);
  if (!rels.empty()) {
    if (!detach) {
      fail(GraphErrc::kHasRelationships,
           item_name(item) + " still has relationships; use DETACH DELETE");
    }
    std::vector<RelId> doomed(rels.begin(), rels.end());
    for (RelId r : doomed) delete_item(r, false);
  }
  auto it = nodes_.find(nid);
  Node n = std::move(it->second);
  nodes_.erase(it);
  DeltaRecord rec;
  rec.kind = DeltaKind::kDeletedNode;
  rec.item = raw(nid);
  rec.labels = std::move(n.labels);
  rec.properties = std::move(n.properties);
  push(std::move(rec));
}

void PropertyGraph::mutate_label(NodeId id, LabelOp op, const std::string& label) {
  require_open();
  auto it = nodes_.find(id);
  if (it == nodes_.end()) fail(GraphErrc::kUnknownItem, "unknown " + item_name(id));
  Node& n = it->second;
  DeltaRecord rec;
  rec.item = raw(id);
  rec.label = label;
  if (op == LabelOp::kAdd) {
    if (n.labels.count(label)) return;
    n.labels.insert(label);
    rec.kind = DeltaKind::kAssignedLabel;
    rec.labels = n.labels;
  } else {
    if (!n.labels.count(label)) {
      fail(GraphErrc::kAbsentLabel, item_name(id) + " has no label " + label);
    }
    rec.kind = DeltaKind::kRemovedLabel;
    rec.labels = n.labels;
    n.labels.erase(label);
  }
  push(std::move(rec));
}

void PropertyGraph::mutate_property(ItemRef item, PropertyOp op, const std::string& key,
                                    Value value) {
  require_open();
  PropertyMap* props = mutable_properties(item);
  if (!props) fail(GraphErrc::kUnknownItem, "unknown " + item_name(item));
  const bool is_node = std::holds_alternative<NodeId>(item);
  auto existing = props->find(key);

  if (op == PropertyOp::kSet && value.is_null()) {
    if (existing == props->end()) return;
    op = PropertyOp::kRemove;
  }

  DeltaRecord rec;
  rec.item = is_node ? raw(std::get<NodeId>(item)) : raw(std::get<RelId>(item));
  rec.key = key;
  if (is_node) {
    rec.labels = node(std::get<NodeId>(item))->labels;
  } else {
    rec.type = relationship(std::get<RelId>(item))->type;
  }

  if (op == PropertyOp::kSet) {
    rec.kind = is_node ? DeltaKind::kAssignedNodeProperty : DeltaKind::kAssignedRelProperty;
    rec.old_value = existing == props->end() ? Value::null() : existing->second;
    rec.new_value = value;
    (*props)[key] = std::move(value);
  } else {
    if (existing == props->end()) {
      fail(GraphErrc::kAbsentProperty, item_name(item) + " has no property " + key);
    }
    rec.kind = is_node ? DeltaKind::kRemovedNodeProperty : DeltaKind::kRemovedRelProperty;
    rec.old_value = existing->second;
    props->erase(existing);
  }
  push(std::move(rec));
}

// ---------------------------------------------------------------------------
// Replay and undo

void PropertyGraph::apply(const DeltaRecord& rec) {
  switch (rec.kind) {
    case DeltaKind::kCreatedNode: {
      NodeId id{rec.item};
      if (nodes_.count(id)) fail(GraphErrc::kIdCollision, "replay: node id in use");
      nodes_.emplace(id, Node{id, rec.labels, rec.properties});
      next_node_ = std::max(next_node_, rec.item + 1);
      break;
    }
    case DeltaKind::kCreatedRel: {
      RelId id{rec.item};
      if (rels_.count(id)) fail(GraphErrc::kIdCollision, "replay: relationship id in use");
      if (!node(rec.source) || !node(rec.target)) {
        fail(GraphErrc::kDanglingEndpoint, "replay: dangling endpoint");
      }
      Relationship rel{id, rec.type, rec.source, rec.target, rec.properties};
      link(rel);
      rels_.emplace(id, std::move(rel));
      next_rel_ = std::max(next_rel_, rec.item + 1);
      break;
    }
    case DeltaKind::kDeletedNode: {
      NodeId id{rec.item};
      if (!nodes_.count(id)) fail(GraphErrc::kUnknownItem, "replay: unknown node");
      if (!incident(id).empty()) fail(GraphErrc::kHasRelationships, "replay: node has rels");
      nodes_.erase(id);
      break;
    }
    case DeltaKind::kDeletedRel: {
      auto it = rels_.find(RelId{rec.item});
      if (it == rels_.end()) fail(GraphErrc::kUnknownItem, "replay: unknown relationship");
      unlink(it->second);
      rels_.erase(it);
      break;
    }
    case DeltaKind::kAssignedLabel:
    case DeltaKind::kRemovedLabel: {
      auto it = nodes_.find(NodeId{rec.item});
      if (it == nodes_.end()) fail(GraphErrc::kUnknownItem, "replay: unknown node");
      if (rec.kind == DeltaKind::kAssignedLabel) {
        it->second.labels.insert(rec.label);
      } else {
        it->second.labels.erase(rec.label);
      }
      break;
    }
    case DeltaKind::kAssignedNodeProperty:
    case DeltaKind::kAssignedRelProperty:
    case DeltaKind::kRemovedNodeProperty:
    case DeltaKind::kRemovedRelProperty: {
      PropertyMap* props = mutable_properties(rec.ref());
      if (!props) fail(GraphErrc::kUnknownItem, "replay: unknown item");
      if (rec.new_value) {
        (*props)[rec.key] = *rec.new_value;
      } else {
        props->erase(rec.key);
      }
      break;
    }
  }
}

void PropertyGraph::replay(const std::vector<DeltaRecord>& records) {
  require_open();
  for (const auto& rec : records) {
    apply(rec);
    log_.push_back(rec);
    next_sequence_ = std::max(next_sequence_, rec.sequence + 1);
  }
}

void PropertyGraph::undo(const DeltaRecord& rec) {
  switch (rec.kind) {
    case DeltaKind::kCreatedNode:
      nodes_.erase(NodeId{rec.item});
      break;
    case DeltaKind::kCreatedRel: {
      auto it = rels_.find(RelId{rec.item});
      if (it != rels_.end()) {
        unlink(it->second);
        rels_.erase(it);
      }
      break;
    }
    case DeltaKind::kDeletedNode:
      nodes_.emplace(NodeId{rec.item}, Node{NodeId{rec.item}, rec.labels, rec.properties});
      break;
    case DeltaKind::kDeletedRel: {
      Relationship rel{RelId{rec.item}, rec.type, rec.source, rec.target, rec.properties};
      link(rel);
      rels_.emplace(rel.id, std::move(rel));
      break;
    }
    case DeltaKind::kAssignedLabel:
      nodes_.at(NodeId{rec.item}).labels.erase(rec.label);
      break;
    case DeltaKind::kRemovedLabel:
      nodes_.at(NodeId{rec.item}).labels.insert(rec.label);
      break;
    case DeltaKind::kAssignedNodeProperty:
    case DeltaKind::kAssignedRelProperty:
    case DeltaKind::kRemovedNodeProperty:
    case DeltaKind::kRemovedRelProperty: {
      PropertyMap* props = mutable_properties(rec.ref());
      if (!rec.old_value || rec.old_value->is_null()) {
        props->erase(rec.key);
      } else {
        (*props)[rec.key] = *rec.old_value;
      }
      break;
    }
  }
}

void PropertyGraph::insert_node(Node n) {
  if (open_) throw GraphError(GraphErrc::kNestedTransaction, "cannot bulk-load inside a transaction");
  if (nodes_.count(n.id)) {
    throw GraphError(GraphErrc::kIdCollision, "duplicate node id " + std::to_string(raw(n.id)));
  }
  next_node_ = std::max(next_node_, raw(n.id) + 1);
  nodes_.emplace(n.id, std::move(n));
}

void PropertyGraph::insert_relationship(Relationship rel) {
  if (open_) throw GraphError(GraphErrc::kNestedTransaction, "cannot bulk-load inside a transaction");
  if (rels_.count(rel.id)) {
    throw GraphError(GraphErrc::kIdCollision,
                     "duplicate relationship id " + std::to_string(raw(rel.id)));
  }
  if (!node(rel.source) || !node(rel.target)) {
    throw GraphError(GraphErrc::kDanglingEndpoint,
                     "relationship " + std::to_string(raw(rel.id)) +
                         " references a missing node");
  }
  next_rel_ = std::max(next_rel_, raw(rel.id) + 1);
  link(rel);
  rels_.emplace(rel.id, std::move(rel));
}

}  // namespace pgt
