#include "revspec/profile_io.hpp"

#include <fstream>

namespace revspec {

using nlohmann::json;

namespace {

// Lengths may be numbers or constant expressions such as "pi" or "2*pi/3".
double read_length(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse(v.get<std::string>(), "s").eval(0.0);
  throw ProfileError("\"length\" must be a number or a constant expression");
}

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ProfileError(std::string("profile file is missing \"") + key + "\"");
  return doc.at(key);
}

}  // namespace

LoadedProfile load_profile(const json& doc) {
  if (!doc.is_object()) throw ProfileError("profile file must hold a JSON object");
  const std::string kind = doc.value("kind", std::string("expression"));
  const std::string name = doc.value("name", std::string());

  if (kind == "expression") {
    const Expr f = parse(field(doc, "expr").get<std::string>());
    return {make_profile(f, name.empty() ? f.to_string("x") : name), 1.0, kind};
  }
  if (kind == "samples") {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : field(doc, "samples")) {
      if (!row.is_array() || row.size() != 2) throw ProfileError("each sample must be a pair [x, f]");
      samples.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return {make_profile(samples, name.empty() ? "samples" : name), 1.0, kind};
  }
  if (kind == "arclength-expression") {
    const Expr a = parse(field(doc, "expr").get<std::string>(), "s");
    const double length = read_length(field(doc, "length"));
    const ArclengthProfile ap = normalize_area(make_arclength_profile(a, length, name.empty() ? "arclength" : name));
    return {momentum_transform(ap), ap.scale, kind};
  }
  throw ProfileError("unknown profile kind \"" + kind + "\"");
}

LoadedProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ProfileError("malformed profile file " + path + ": " + e.what());
  }
  return load_profile(doc);
}

}  // namespace revspec
