#include "pgt/store/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pgt {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Value& v) {
  const auto& s = v.storage();
  if (std::holds_alternative<std::monostate>(s)) return nullptr;
  if (v.is_text()) return v.text();
  if (v.is_integer()) return v.integer();
  if (v.is_float()) return v.floating();
  if (v.is_bool()) return v.boolean();
  if (v.is_datetime()) return format_rfc3339(v.datetime());
  return Json(v.list());
}

Value from_json(const Json& j) {
  switch (j.type()) {
    case Json::value_t::string: {
      const auto& s = j.get_ref<const std::string&>();
      if (auto t = parse_rfc3339(s); t && s.back() == 'Z') return *t;
      return s;
    }
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
      return j.get<std::int64_t>();
    case Json::value_t::number_float:
      return j.get<double>();
    case Json::value_t::boolean:
      return j.get<bool>();
    case Json::value_t::array: {
      TextList out;
      for (const auto& e : j) {
        if (!e.is_string()) {
          throw GraphError(GraphErrc::kMalformedSnapshot, "list properties hold strings only");
        }
        out.push_back(e.get<std::string>());
      }
      return out;
    }
    default:
      throw GraphError(GraphErrc::kMalformedSnapshot,
                       std::string("unsupported property value: ") + j.type_name());
  }
}

Json properties_json(const PropertyMap& props) {
  Json out = Json::object();
  for (const auto& [k, v] : props) out[k] = to_json(v);
  return out;
}

PropertyMap read_properties(const Json& j) {
  PropertyMap out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw GraphError(GraphErrc::kMalformedSnapshot, "properties must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_null()) out[k] = from_json(v);
  }
  return out;
}

const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw GraphError(GraphErrc::kMalformedSnapshot, std::string("missing key '") + key + "'");
  }
  return obj.at(key);
}

}  // namespace

std::string export_snapshot(const PropertyGraph& graph) {
  if (graph.in_transaction()) {
    throw GraphError(GraphErrc::kNestedTransaction, "cannot export with an open transaction");
  }
  Json doc = Json::object();
  Json nodes = Json::array();
  for (const auto& [id, n] : graph.nodes()) {
    Json jn = Json::object();
    jn["id"] = raw(id);
    jn["labels"] = Json(std::vector<std::string>(n.labels.begin(), n.labels.end()));
    jn["properties"] = properties_json(n.properties);
    nodes.push_back(std::move(jn));
  }
  Json rels = Json::array();
  for (const auto& [id, r] : graph.relationships()) {
    Json jr = Json::object();
    jr["id"] = raw(id);
    jr["type"] = r.type;
    jr["source"] = raw(r.source);
    jr["target"] = raw(r.target);
    jr["properties"] = properties_json(r.properties);
    rels.push_back(std::move(jr));
  }
  doc["nodes"] = std::move(nodes);
  doc["relationships"] = std::move(rels);
  return doc.dump(2) + "\n";
}

PropertyGraph import_snapshot(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(GraphErrc::kMalformedSnapshot, std::string("snapshot parse error: ") + e.what());
  }
  PropertyGraph g;
  try {
    for (const auto& jn : require(doc, "nodes")) {
      Node n;
      n.id = NodeId{require(jn, "id").get<std::uint64_t>()};
      for (const auto& l : require(jn, "labels")) n.labels.insert(l.get<std::string>());
      if (jn.contains("properties")) n.properties = read_properties(jn.at("properties"));
      g.insert_node(std::move(n));
    }
    for (const auto& jr : require(doc, "relationships")) {
      Relationship r;
      r.id = RelId{require(jr, "id").get<std::uint64_t>()};
      r.type = require(jr, "type").get<std::string>();
      r.source = NodeId{require(jr, "source").get<std::uint64_t>()};
      r.target = NodeId{require(jr, "target").get<std::uint64_t>()};
      if (jr.contains("properties")) r.properties = read_properties(jr.at("properties"));
      g.insert_relationship(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(GraphErrc::kMalformedSnapshot, std::string("malformed snapshot: ") + e.what());
  }
  return g;
}

void save_snapshot(const PropertyGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << export_snapshot(graph);
}

PropertyGraph load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return import_snapshot(ss.str());
}

}  // namespace pgt
