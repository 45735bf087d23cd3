#include "dlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dlab {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Operator operator_from_json_obj(const json& j, const std::string& where) {
  if (!j.is_object())
    throw ArgumentError(where + ": operator must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ArgumentError(where + ": missing integer \"dim\"");
  const long dim = j["dim"].get<long>();
  if (dim < 1 || dim > kMaxDim)
    throw ArgumentError(where + ": dim must be between 1 and " +
                        std::to_string(kMaxDim));
  auto read_part = [&](const char* key, bool required) {
    Eigen::MatrixXd part = Eigen::MatrixXd::Zero(dim, dim);
    if (!j.contains(key)) {
      if (required)
        throw ArgumentError(where + ": missing \"" + key + "\" matrix");
      return part;
    }
    const json& rows = j[key];
    if (!rows.is_array() || static_cast<long>(rows.size()) != dim)
      throw ArgumentError(where + ": \"" + key + "\" must be a " +
                          std::to_string(dim) + "-row array");
    for (long r = 0; r < dim; ++r) {
      const json& row = rows[r];
      if (!row.is_array() || static_cast<long>(row.size()) != dim)
        throw ArgumentError(where + ": \"" + key + "\" row " +
                            std::to_string(r) + " must have " +
                            std::to_string(dim) + " entries");
      for (long c = 0; c < dim; ++c) {
        if (!row[c].is_number())
          throw ArgumentError(where + ": \"" + key + "\" entry (" +
                              std::to_string(r) + "," + std::to_string(c) +
                              ") is not a number");
        part(r, c) = row[c].get<double>();
      }
    }
    return part;
  };
  Eigen::MatrixXd re = read_part("re", true);
  Eigen::MatrixXd im = read_part("im", false);
  Operator op(dim, dim);
  op.real() = re;
  op.imag() = im;
  return op;
}

json parse_or_throw(const std::string& text, const std::string& where) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ArgumentError(where + ": malformed JSON");
  return j;
}

}  // namespace

Operator operator_from_json(const std::string& text) {
  return operator_from_json_obj(parse_or_throw(text, "operator"), "operator");
}

std::string operator_to_json(const Operator& op) {
  json j;
  j["dim"] = op.rows();
  json re = json::array(), im = json::array();
  for (long r = 0; r < op.rows(); ++r) {
    json rrow = json::array(), irow = json::array();
    for (long c = 0; c < op.cols(); ++c) {
      rrow.push_back(op(r, c).real());
      irow.push_back(op(r, c).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << content;
  if (!out) throw ArgumentError("write failed: " + path);
}

Operator load_operator(const std::string& path) {
  return operator_from_json_obj(parse_or_throw(read_text_file(path), path),
                                path);
}

StateVector state_from_json(const std::string& text) {
  json j = parse_or_throw(text, "state");
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array())
    throw ArgumentError("state: expected {\"re\": [...], \"im\": [...]}");
  const json& re = j["re"];
  const json* im = j.contains("im") ? &j["im"] : nullptr;
  if (im && (!im->is_array() || im->size() != re.size()))
    throw ArgumentError("state: \"im\" length differs from \"re\"");
  StateVector v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    if (!re[i].is_number()) throw ArgumentError("state: non-numeric entry");
    double a = re[i].get<double>();
    double b = 0.0;
    if (im) {
      if (!(*im)[i].is_number())
        throw ArgumentError("state: non-numeric entry");
      b = (*im)[i].get<double>();
    }
    v[i] = Cplx(a, b);
  }
  return v;
}

StateVector load_state(const std::string& path) {
  return state_from_json(read_text_file(path));
}

NamedOperatorMap load_named_operators(const std::string& path) {
  json j = parse_or_throw(read_text_file(path), path);
  if (!j.is_object())
    throw ArgumentError(path + ": expected {\"name\": operator, ...}");
  NamedOperatorMap ops;
  for (auto it = j.begin(); it != j.end(); ++it)
    ops[it.key()] = operator_from_json_obj(it.value(), path + ":" + it.key());
  return ops;
}

DecouplingGroup load_group(const std::string& path) {
  json j = parse_or_throw(read_text_file(path), path);
  const json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object() && j.contains("elements") &&
             j["elements"].is_array()) {
    list = &j["elements"];
  } else {
    throw ArgumentError(path +
                        ": expected an array or {\"elements\": [...]}");
  }
  std::vector<Operator> elements;
  for (std::size_t i = 0; i < list->size(); ++i)
    elements.push_back(operator_from_json_obj(
        (*list)[i], path + " element " + std::to_string(i)));
  return verify_group(elements);
}

BathModel load_bath(const std::string& path, const ResolveContext& ctx) {
  json j = parse_or_throw(read_text_file(path), path);
  if (!j.is_object()) throw ArgumentError(path + ": expected a JSON object");
  BathModel bath;
  if (!j.contains("bath_dim") || !j["bath_dim"].is_number_integer())
    throw ArgumentError(path + ": missing integer \"bath_dim\"");
  bath.bath_dim = j["bath_dim"].get<int>();
  if (j.contains("h_bath"))
    bath.h_bath = operator_from_json_obj(j["h_bath"], path + " h_bath");
  if (j.contains("couplings")) {
    const json& cs = j["couplings"];
    if (!cs.is_array())
      throw ArgumentError(path + ": \"couplings\" must be an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const json& c = cs[i];
      const std::string where = path + " coupling " + std::to_string(i);
      if (!c.is_object() || !c.contains("system") || !c.contains("bath"))
        throw ArgumentError(where + ": need \"system\" and \"bath\"");
      Operator sys;
      if (c["system"].is_string())
        sys = resolve_operator(parse_ctor_string(c["system"].get<std::string>()),
                               ctx);
      else
        sys = operator_from_json_obj(c["system"], where + " system");
      Operator b = operator_from_json_obj(c["bath"], where + " bath");
      bath.couplings.emplace_back(std::move(sys), std::move(b));
    }
  }
  return bath;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string format_sweep_csv(const SweepResult& result) {
  std::string out = "t_c,metric,value\n";
  for (const SweepRow& row : result.rows)
    out += g17(row.x) + "," + row.metric + "," + g17(row.value) + "\n";
  return out;
}

std::string format_trajectory_csv(const Trajectory& traj,
                                  const std::vector<double>& metric_values) {
  if (metric_values.size() != traj.states.size())
    throw ArgumentError("metric series does not match the trajectory");
  std::string out = "cycle_index,time,metric\n";
  for (std::size_t i = 0; i < metric_values.size(); ++i)
    out += std::to_string(traj.cycle_indices[i]) + "," + g17(traj.times[i]) +
           "," + g17(metric_values[i]) + "\n";
  return out;
}

}  // namespace dlab
