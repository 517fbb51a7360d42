#include "nbhd/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nbhd/error.hpp"

namespace nbhd {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw FormatError("model " + (path.empty() ? std::string("/") : path) + ": " + message);
}

WorldSet read_world_set(const json& j, const Domain& d, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of world labels");
  WorldSet out = d.empty_set();
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(path + "/" + std::to_string(i), "expected a world label");
    auto w = d.find(j[i].get<std::string>());
    if (!w) fail(path + "/" + std::to_string(i), "unknown world '" + j[i].get<std::string>() + "'");
    out = out.with(*w);
  }
  return out;
}

Family read_family(const json& j, const Domain& d, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of world sets");
  std::vector<WorldSet> sets;
  for (std::size_t i = 0; i < j.size(); ++i)
    sets.push_back(read_world_set(j[i], d, path + "/" + std::to_string(i)));
  return Family(std::move(sets));
}

NeighbourhoodMap read_map(const json& j, const Domain& d, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object keyed by world label or \"*\"");
  NeighbourhoodMap map(d.size());
  if (auto star = j.find("*"); star != j.end()) {
    Family f = read_family(*star, d, path + "/*");
    for (std::size_t w = 0; w < d.size(); ++w) map[w] = f;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "*") continue;
    auto w = d.find(key);
    if (!w) fail(path + "/" + key, "unknown world '" + key + "'");
    map[*w] = read_family(value, d, path + "/" + key);
  }
  return map;
}

AgentId read_agent(const std::string& key, const std::string& path) {
  if (key.empty() || key.size() > 9 ||
      key.find_first_not_of("0123456789") != std::string::npos)
    fail(path, "agent id '" + key + "' is not a non-negative integer");
  return AgentId{static_cast<std::uint32_t>(std::stoul(key))};
}

json write_map(const Domain& d, const NeighbourhoodMap& map) {
  auto family_json = [&](const Family& f) {
    json arr = json::array();
    for (auto x : f) arr.push_back(world_set_to_json(d, x));
    return arr;
  };
  json out = json::object();
  bool constant = std::all_of(map.begin(), map.end(), [&](const Family& f) { return f == map[0]; });
  if (constant) {
    out["*"] = family_json(map[0]);
  } else {
    for (std::size_t w = 0; w < d.size(); ++w) out[d.label(w)] = family_json(map[w]);
  }
  return out;
}

}  // namespace

json world_set_to_json(const Domain& d, WorldSet x) {
  json arr = json::array();
  for (std::size_t w = 0; w < d.size(); ++w)
    if (x.contains(w)) arr.push_back(d.label(w));
  return arr;
}

Model model_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  auto worlds = doc.find("worlds");
  if (worlds == doc.end() || !worlds->is_array()) fail("/worlds", "missing array of world labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < worlds->size(); ++i) {
    if (!(*worlds)[i].is_string()) fail("/worlds/" + std::to_string(i), "expected a string");
    labels.push_back((*worlds)[i].get<std::string>());
  }
  std::optional<Domain> domain;
  try {
    domain.emplace(std::move(labels));
  } catch (const ModelError& e) {
    fail("/worlds", e.what());
  }
  const Domain& d = *domain;

  Valuation valuation;
  if (auto v = doc.find("valuation"); v != doc.end()) {
    if (!v->is_object()) fail("/valuation", "expected an object");
    for (const auto& [name, set] : v->items())
      valuation[name] = read_world_set(set, d, "/valuation/" + name);
  }

  const bool has_agents = doc.contains("agents");
  const bool has_groups = doc.contains("groups");
  if (has_agents == has_groups) fail("", "exactly one of \"agents\" and \"groups\" must be present");

  if (has_agents) {
    const json& agents = doc["agents"];
    if (!agents.is_object()) fail("/agents", "expected an object");
    AgentModel m{d, std::move(valuation), {}};
    for (const auto& [key, value] : agents.items())
      m.agents[read_agent(key, "/agents/" + key)] = read_map(value, d, "/agents/" + key);
    return m;
  }
  const json& groups = doc["groups"];
  if (!groups.is_object()) fail("/groups", "expected an object");
  GeneralModel m{d, std::move(valuation), {}};
  for (const auto& [key, value] : groups.items()) {
    std::optional<Group> g;
    try {
      g = parse_group(key);
    } catch (const Error& e) {
      fail("/groups/" + key, std::string("bad group key: ") + e.what());
    }
    m.groups[*g] = read_map(value, d, "/groups/" + key);
  }
  return m;
}

Model parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("model: JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return model_from_json(doc);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

json model_to_json(const Model& m) {
  const Domain& d = m.domain();
  json doc;
  doc["worlds"] = json(std::vector<std::string>(d.labels().begin(), d.labels().end()));
  json val = json::object();
  for (const auto& [name, set] : m.valuation()) val[name] = world_set_to_json(d, set);
  doc["valuation"] = val;
  if (auto a = m.as_agent_model()) {
    json agents = json::object();
    for (const auto& [id, map] : a->agents) agents[std::to_string(id.value)] = write_map(d, map);
    doc["agents"] = agents;
  } else {
    json groups = json::object();
    for (const auto& [g, map] : m.as_general_model()->groups) groups[g.to_string()] = write_map(d, map);
    doc["groups"] = groups;
  }
  return doc;
}

void save_model(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << model_to_json(m).dump(2) << '\n';
}

}  // namespace nbhd
