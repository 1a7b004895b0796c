#include "rheograph/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rheo {

namespace {

// Parameters each family reads, split into required and defaulted ones.
struct FieldSpec {
  std::set<std::string> required;
  std::set<std::string> optional;
};

FieldSpec bulk_fields(Family f, ActivationKind kind) {
  switch (f) {
    case Family::Euler:
    case Family::RigidOnly:
      return {{}, {}};
    case Family::NavierStokes:
      return {{"nu_star"}, {}};
    case Family::PowerLaw:
    case Family::GenPowerLaw:
      return {{"nu_star", "d_star", "r"}, {}};
    case Family::StressPowerLaw:
      return {{"nu_star", "d_star", "r_prime"}, {}};
    case Family::BoundedStress:
      return {{"nu_star", "d_star", "a_exp"}, {}};
    case Family::BoundedRate:
      return {{"nu_star", "d_star", "b_exp"}, {}};
    case Family::Bingham:
      return {{"nu_star"}, {"sigma_star"}};
    case Family::HerschelBulkley:
      return {{"nu_star", "d_star", "r"}, {"sigma_star"}};
    case Family::ActivatedEuler:
    case Family::RegularizedActivatedEuler: {
      FieldSpec fs{{"nu_star"}, {"delta_star", "activation_kind"}};
      if (f == Family::RegularizedActivatedEuler)
        fs.optional.insert("epsilon_star");
      switch (kind) {
        case ActivationKind::One:
          break;
        case ActivationKind::PowerLaw:
          fs.required.insert({"d_star", "r"});
          break;
        case ActivationKind::ShiftedPowerLaw:
        case ActivationKind::Ladyzhenskaya:
          fs.required.insert({"d_star", "r"});
          fs.optional.insert("A");
          break;
      }
      return fs;
    }
    case Family::AdditiveMix:
      return {{"components"}, {}};
    case Family::RigidFreeFlowLimit:
    case Family::EulerRigidLimit:
      return {{"nu_star", "d_star"}, {}};
  }
  fail(ErrorCode::InvalidConfig, "unknown family");
}

double number_at(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (!v.is_number())
    fail(ErrorCode::InvalidConfig, "parameter '" + key + "' must be a number");
  return v.get<double>();
}

void check_fields(const json& params, const FieldSpec& fs,
                  const std::string& what) {
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!fs.required.count(it.key()) && !fs.optional.count(it.key()))
      fail(ErrorCode::InvalidConfig,
           what + " does not use parameter '" + it.key() + "'");
  }
  for (const auto& key : fs.required)
    if (!params.contains(key))
      fail(ErrorCode::InvalidConfig,
           what + " requires parameter '" + key + "'");
}

json model_header(const std::string& family) {
  json j;
  j["family"] = family;
  j["params"] = json::object();
  return j;
}

std::pair<std::string, json> split_model(const json& j,
                                         const std::string& what) {
  if (!j.is_object())
    fail(ErrorCode::InvalidConfig, what + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "family" && it.key() != "params")
      fail(ErrorCode::InvalidConfig,
           what + " allows only 'family' and 'params', got '" + it.key() +
               "'");
  if (!j.contains("family") || !j.at("family").is_string())
    fail(ErrorCode::InvalidConfig, what + " requires a string 'family'");
  json params = j.value("params", json::object());
  if (!params.is_object())
    fail(ErrorCode::InvalidConfig, what + " 'params' must be an object");
  return {j.at("family").get<std::string>(), params};
}

}  // namespace

json to_json(const BulkModel& m) {
  json j = model_header(to_string(m.family));
  json& p = j["params"];
  if (m.family == Family::AdditiveMix) {
    p["components"] = json::array();
    for (const auto& c : m.components) p["components"].push_back(to_json(c));
    return j;
  }
  FieldSpec fs = bulk_fields(m.family, m.activation_kind);
  auto put = [&](const std::string& key) {
    if (key == "nu_star") p[key] = m.nu_star;
    else if (key == "d_star") p[key] = m.d_star;
    else if (key == "r") p[key] = m.r;
    else if (key == "r_prime") p[key] = m.r_prime;
    else if (key == "delta_star") p[key] = m.delta_star;
    else if (key == "sigma_star") p[key] = m.sigma_star;
    else if (key == "epsilon_star") p[key] = m.epsilon_star;
    else if (key == "A") p[key] = m.A;
    else if (key == "a_exp") p[key] = m.a_exp;
    else if (key == "b_exp") p[key] = m.b_exp;
    else if (key == "activation_kind") p[key] = to_string(m.activation_kind);
  };
  for (const auto& key : fs.required) put(key);
  for (const auto& key : fs.optional) put(key);
  return j;
}

BulkModel bulk_model_from_json(const json& j) {
  auto [family_name, params] = split_model(j, "bulk model");
  BulkModel m;
  m.family = family_from_string(family_name);

  if (m.family == Family::AdditiveMix) {
    check_fields(params, bulk_fields(m.family, ActivationKind::One),
                 family_name);
    const json& comps = params.at("components");
    if (!comps.is_array())
      fail(ErrorCode::InvalidConfig, "'components' must be an array");
    for (const auto& cj : comps)
      m.components.push_back(bulk_model_from_json(cj));
    validate(m);
    return m;
  }

  ActivationKind kind = ActivationKind::One;
  if (params.contains("activation_kind")) {
    if (m.family != Family::ActivatedEuler &&
        m.family != Family::RegularizedActivatedEuler)
      fail(ErrorCode::InvalidConfig,
           family_name + " does not use parameter 'activation_kind'");
    if (!params.at("activation_kind").is_string())
      fail(ErrorCode::InvalidConfig, "'activation_kind' must be a string");
    kind = activation_kind_from_string(
        params.at("activation_kind").get<std::string>());
  }
  m.activation_kind = kind;

  FieldSpec fs = bulk_fields(m.family, kind);
  check_fields(params, fs, family_name);

  auto get = [&](const std::string& key, double& slot) {
    if (params.contains(key)) slot = number_at(params, key);
  };
  get("nu_star", m.nu_star);
  get("d_star", m.d_star);
  get("r", m.r);
  get("r_prime", m.r_prime);
  get("delta_star", m.delta_star);
  get("sigma_star", m.sigma_star);
  get("epsilon_star", m.epsilon_star);
  get("A", m.A);
  get("a_exp", m.a_exp);
  get("b_exp", m.b_exp);
  validate(m);
  return m;
}

json to_json(const BoundaryModel& bc) {
  json j = model_header(to_string(bc.family));
  json& p = j["params"];
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
    case BoundaryFamily::NoSlip:
      break;
    case BoundaryFamily::NavierSlip:
      p["gamma_star"] = bc.gamma_star;
      break;
    case BoundaryFamily::NoSlipNavierSlip:
      p["gamma_star"] = bc.gamma_star;
      p["s_star"] = bc.s_star;
      break;
    case BoundaryFamily::FreeSlipNavierSlip:
      p["gamma_star"] = bc.gamma_star;
      p["v_star"] = bc.v_star;
      break;
    case BoundaryFamily::Combined:
      p["gamma_star"] = bc.gamma_star;
      p["s_star"] = bc.s_star;
      p["v_star"] = bc.v_star;
      break;
  }
  return j;
}

BoundaryModel boundary_model_from_json(const json& j) {
  auto [family_name, params] = split_model(j, "boundary model");
  BoundaryModel bc;
  bc.family = boundary_family_from_string(family_name);
  FieldSpec fs;
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
    case BoundaryFamily::NoSlip:
      bc.gamma_star = 0.0;
      break;
    case BoundaryFamily::NavierSlip:
      fs.required = {"gamma_star"};
      break;
    case BoundaryFamily::NoSlipNavierSlip:
      fs.required = {"gamma_star", "s_star"};
      break;
    case BoundaryFamily::FreeSlipNavierSlip:
      fs.required = {"gamma_star", "v_star"};
      break;
    case BoundaryFamily::Combined:
      fs.required = {"gamma_star", "s_star", "v_star"};
      break;
  }
  check_fields(params, fs, family_name);
  if (params.contains("gamma_star"))
    bc.gamma_star = number_at(params, "gamma_star");
  bc.s_star = params.contains("s_star") ? number_at(params, "s_star") : 0.0;
  bc.v_star = params.contains("v_star") ? number_at(params, "v_star") : 0.0;
  validate(bc);
  return bc;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    fail(ErrorCode::InvalidConfig, "malformed JSON");
  return j;
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void write_text_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidConfig, "cannot open file: " + tmp);
    out << text;
    if (!out.flush())
      fail(ErrorCode::InvalidConfig, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail(ErrorCode::InvalidConfig, "atomic rename failed: " + path);
}

}  // namespace rheo
