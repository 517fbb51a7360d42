#include "nbhd/proof_io.hpp"

#include <fstream>
#include <sstream>

#include "nbhd/error.hpp"

namespace nbhd {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw FormatError("proof " + path + ": " + message);
}

Formula read_formula(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a formula string");
  try {
    return parse(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

Group read_group(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of agent ids");
  std::vector<AgentId> ids;
  for (const auto& id : j) {
    if (!id.is_number_integer() || id.get<std::int64_t>() < 0 || id.get<std::int64_t>() > 0xFFFFFFFF)
      fail(path, "agent ids must be non-negative integers");
    ids.push_back(AgentId{id.get<std::uint32_t>()});
  }
  return Group(std::move(ids));
}

std::size_t read_line_ref(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0) fail(path, "expected a 1-based line number");
  return j.get<std::size_t>();
}

SchemaId read_schema(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a schema name");
  try {
    return parse_schema(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

Justification read_justification(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    fail(path, "expected an object with a \"type\"");
  const std::string type = j["type"].get<std::string>();
  if (type == "taut") return {Justification::Taut{}};
  if (type == "axiom") {
    Justification::Axiom ax;
    if (j.contains("schema")) ax.schema = read_schema(j["schema"], path + "/schema");
    if (j.contains("binding")) {
      const json& b = j["binding"];
      const std::string bp = path + "/binding";
      if (!b.is_object()) fail(bp, "expected an object");
      SyntacticBinding binding;
      if (b.contains("G")) binding.G = read_group(b["G"], bp + "/G");
      if (b.contains("H")) binding.H = read_group(b["H"], bp + "/H");
      if (b.contains("J")) binding.J = read_group(b["J"], bp + "/J");
      if (b.contains("phi")) binding.phi = read_formula(b["phi"], bp + "/phi");
      if (b.contains("psi")) binding.psi = read_formula(b["psi"], bp + "/psi");
      ax.binding = std::move(binding);
    }
    return {std::move(ax)};
  }
  if (type == "mp") {
    const json& from = j.value("from", json());
    if (!from.is_array() || from.size() != 2) fail(path + "/from", "expected [minor, major]");
    return {Justification::ModusPonens{read_line_ref(from[0], path + "/from/0"),
                                       read_line_ref(from[1], path + "/from/1")}};
  }
  if (type == "re") {
    if (!j.contains("from")) fail(path, "missing \"from\"");
    if (!j.contains("group")) fail(path, "missing \"group\"");
    return {Justification::Replacement{read_line_ref(j["from"], path + "/from"),
                                       read_group(j["group"], path + "/group")}};
  }
  fail(path + "/type", "unknown justification type '" + type + "'");
}

json group_json(const Group& g) {
  json arr = json::array();
  for (auto id : g.members()) arr.push_back(id.value);
  return arr;
}

json justification_json(const Justification& just) {
  json j;
  std::visit(
      [&](const auto& rule) {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, Justification::Taut>) {
          j["type"] = "taut";
        } else if constexpr (std::is_same_v<T, Justification::Axiom>) {
          j["type"] = "axiom";
          if (rule.schema) j["schema"] = schema_key(*rule.schema);
          if (rule.binding) {
            json b = json::object();
            if (rule.binding->G) b["G"] = group_json(*rule.binding->G);
            if (rule.binding->H) b["H"] = group_json(*rule.binding->H);
            if (rule.binding->J) b["J"] = group_json(*rule.binding->J);
            if (rule.binding->phi) b["phi"] = render(*rule.binding->phi);
            if (rule.binding->psi) b["psi"] = render(*rule.binding->psi);
            j["binding"] = b;
          }
        } else if constexpr (std::is_same_v<T, Justification::ModusPonens>) {
          j["type"] = "mp";
          j["from"] = {rule.minor, rule.major};
        } else {
          j["type"] = "re";
          j["from"] = rule.from;
          j["group"] = group_json(rule.group);
        }
      },
      just.rule);
  return j;
}

std::vector<Formula> read_formula_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of formulas");
  std::vector<Formula> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_formula(j[i], path + "/" + std::to_string(i)));
  return out;
}

}  // namespace

LogicDescriptor logic_from_json(const json& j) {
  LogicDescriptor l;
  if (j.is_null()) return l;
  if (!j.is_object()) fail("/logic", "expected an object");
  if (j.contains("extensions")) {
    const json& ext = j["extensions"];
    if (!ext.is_array()) fail("/logic/extensions", "expected an array");
    for (std::size_t i = 0; i < ext.size(); ++i)
      l.extensions.push_back(read_schema(ext[i], "/logic/extensions/" + std::to_string(i)));
  }
  if (j.contains("cg")) {
    if (!j["cg"].is_boolean()) fail("/logic/cg", "expected a boolean");
    l.replace_b1_with_cg = j["cg"].get<bool>();
  }
  return l;
}

json logic_to_json(const LogicDescriptor& l) {
  json ext = json::array();
  for (const auto& s : l.extensions) ext.push_back(schema_key(s));
  return json{{"extensions", ext}, {"cg", l.replace_b1_with_cg}};
}

ProofFile proof_from_json(const json& doc) {
  if (!doc.is_object()) fail("/", "expected a JSON object");
  ProofFile file;
  file.logic = logic_from_json(doc.value("logic", json()));
  if (!doc.contains("lines") || !doc["lines"].is_array()) fail("/lines", "missing array of lines");
  const json& lines = doc["lines"];
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string path = "/lines/" + std::to_string(i);
    const json& line = lines[i];
    if (!line.is_object()) fail(path, "expected an object");
    if (!line.contains("formula")) fail(path, "missing \"formula\"");
    if (!line.contains("just")) fail(path, "missing \"just\"");
    file.proof.lines.push_back(
        {read_formula(line["formula"], path + "/formula"), read_justification(line["just"], path + "/just")});
  }
  if (doc.contains("premises")) file.proof.premises = read_formula_list(doc["premises"], "/premises");
  if (doc.contains("gamma")) file.gamma = read_formula_list(doc["gamma"], "/gamma");
  if (doc.contains("conclusion")) file.conclusion = read_formula(doc["conclusion"], "/conclusion");
  if (file.gamma && !file.conclusion) fail("/", "\"gamma\" given without \"conclusion\"");
  if (!file.proof.premises.empty() && !file.conclusion) fail("/", "\"premises\" given without \"conclusion\"");
  return file;
}

ProofFile parse_proof(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("proof: JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return proof_from_json(doc);
}

ProofFile load_proof(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open proof file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_proof(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

json proof_to_json(const ProofFile& file) {
  json doc;
  doc["logic"] = logic_to_json(file.logic);
  json lines = json::array();
  for (const auto& line : file.proof.lines)
    lines.push_back({{"formula", render(line.formula)}, {"just", justification_json(line.justification)}});
  doc["lines"] = lines;
  auto list = [](const std::vector<Formula>& fs) {
    json arr = json::array();
    for (const auto& f : fs) arr.push_back(render(f));
    return arr;
  };
  if (!file.proof.premises.empty()) doc["premises"] = list(file.proof.premises);
  if (file.gamma) doc["gamma"] = list(*file.gamma);
  if (file.conclusion) doc["conclusion"] = render(*file.conclusion);
  return doc;
}

ProofVerdict check(const ProofFile& file) {
  if (!file.conclusion) return check_proof(file.proof, file.logic);
  const std::vector<Formula> gamma = file.gamma.value_or(std::vector<Formula>{});
  return check_entailment_certificate(gamma, *file.conclusion, file.proof, file.logic);
}

}  // namespace nbhd
