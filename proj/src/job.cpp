#include "ncp/job.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ncp/check.hpp"
#include "ncp/dual_affine.hpp"
#include "ncp/errors.hpp"
#include "ncp/fock.hpp"
#include "ncp/levy.hpp"
#include "ncp/mixed_moments.hpp"
#include "ncp/moments.hpp"
#include "ncp/version.hpp"

namespace ncp {

namespace {

[[noreturn]] void fail_schema(const std::string& field, const std::string& why) {
  throw SchemaError("field '" + field + "' " + why);
}

const Json& member(const Json& obj, const std::string& field) {
  if (!obj.is_object()) fail_schema(field, "is missing (payload must be an object)");
  const auto it = obj.find(field);
  if (it == obj.end()) fail_schema(field, "is missing");
  return *it;
}

double as_number(const Json& v, const std::string& field) {
  if (!v.is_number()) fail_schema(field, "must be a number");
  return v.get<double>();
}

int as_int(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) fail_schema(field, "must be an integer");
  return v.get<int>();
}

bool as_bool(const Json& v, const std::string& field) {
  if (!v.is_boolean()) fail_schema(field, "must be a boolean");
  return v.get<bool>();
}

std::string as_string(const Json& v, const std::string& field) {
  if (!v.is_string()) fail_schema(field, "must be a string");
  return v.get<std::string>();
}

std::vector<double> as_number_array(const Json& v, const std::string& field, bool nonempty) {
  if (!v.is_array()) fail_schema(field, "must be an array of numbers");
  if (nonempty && v.empty()) fail_schema(field, "must be a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) fail_schema(field, "must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Complex as_complex(const Json& v, const std::string& field) {
  if (v.is_number()) return Complex{v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex{v[0].get<double>(), v[1].get<double>()};
  }
  fail_schema(field, "must be a number or a [re, im] pair");
}

Flavor flavor_from(const Json& payload, const std::string& field) {
  const std::string name = as_string(member(payload, field), field);
  if (name == "classical") return Flavor::Classical;
  if (name == "free") return Flavor::Free;
  if (name == "boolean") return Flavor::Boolean;
  fail_schema(field, "must be one of classical, free, boolean");
}

GeneratorTuple parse_tuple(const Json& v, const std::string& path) {
  if (!v.is_object()) fail_schema(path, "must be an object {d, T, u, v, lambda}");
  GeneratorTuple g;
  g.d = as_int(member(v, "d"), path + ".d");
  if (g.d < 0) fail_schema(path + ".d", "must be nonnegative");
  const Json& t = member(v, "T");
  if (!t.is_array() || t.size() != static_cast<std::size_t>(g.d)) {
    fail_schema(path + ".T", "must be a " + std::to_string(g.d) + " x " +
                                 std::to_string(g.d) + " array of numbers");
  }
  g.T = CMatrix::Zero(g.d, g.d);
  for (int i = 0; i < g.d; ++i) {
    const auto row = as_number_array(t[static_cast<std::size_t>(i)],
                                     path + ".T[" + std::to_string(i) + "]", false);
    if (row.size() != static_cast<std::size_t>(g.d)) {
      fail_schema(path + ".T[" + std::to_string(i) + "]",
                  "must have length " + std::to_string(g.d));
    }
    for (int j = 0; j < g.d; ++j) g.T(i, j) = row[static_cast<std::size_t>(j)];
  }
  const auto fill = [&](const char* key) {
    const auto entries = as_number_array(member(v, key), path + "." + key, false);
    if (entries.size() != static_cast<std::size_t>(g.d)) {
      fail_schema(path + "." + key, "must have length " + std::to_string(g.d));
    }
    CVector out = CVector::Zero(g.d);
    for (int i = 0; i < g.d; ++i) out(i) = entries[static_cast<std::size_t>(i)];
    return out;
  };
  g.u = fill("u");
  g.v = fill("v");
  g.lambda = as_number(member(v, "lambda"), path + ".lambda");
  return g;
}

double real_for_output(Complex z, const std::string& what) {
  if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real()))) {
    throw ContractError(what + " came out complex (imaginary part " +
                        std::to_string(z.imag()) + "); cannot serialize as a real tuple");
  }
  return z.real();
}

Json tuple_to_json(const GeneratorTuple& g, const std::string& what) {
  Json out;
  out["d"] = g.d;
  Json t = Json::array();
  for (int i = 0; i < g.d; ++i) {
    Json row = Json::array();
    for (int j = 0; j < g.d; ++j) row.push_back(real_for_output(g.T(i, j), what + ".T"));
    t.push_back(std::move(row));
  }
  out["T"] = std::move(t);
  Json u = Json::array();
  Json v = Json::array();
  for (int i = 0; i < g.d; ++i) {
    u.push_back(real_for_output(g.u(i), what + ".u"));
    v.push_back(real_for_output(g.v(i), what + ".v"));
  }
  out["u"] = std::move(u);
  out["v"] = std::move(v);
  out["lambda"] = real_for_output(g.lambda, what + ".lambda");
  return out;
}

struct CommandOutput {
  Json tolerances = Json::object();
  Json result = Json::object();
};

CommandOutput do_cumulants(const Json& payload) {
  const Flavor flavor = flavor_from(payload, "flavor");
  const auto m = as_number_array(member(payload, "m"), "m", true);
  const auto kappa = moments_to_cumulants(MomentSequence(m), flavor);
  CommandOutput out;
  out.tolerances["order_cap"] = flavor_order_cap(flavor);
  out.result["flavor"] = flavor_name(flavor);
  out.result["order"] = kappa.order();
  out.result["cumulants"] = kappa.values;
  return out;
}

CommandOutput do_convolve(const Json& payload) {
  const Flavor flavor = flavor_from(payload, "flavor");
  const auto m1 = as_number_array(member(payload, "m1"), "m1", true);
  const auto m2 = as_number_array(member(payload, "m2"), "m2", true);
  const auto m = convolve(MomentSequence(m1), MomentSequence(m2), flavor);
  CommandOutput out;
  out.tolerances["order_cap"] = flavor_order_cap(flavor);
  out.result["flavor"] = flavor_name(flavor);
  out.result["order"] = m.order();
  out.result["moments"] = m.values;
  return out;
}

CommandOutput do_bp_map(const Json& payload) {
  const auto m = as_number_array(member(payload, "m"), "m", true);
  const auto mapped = bercovici_pata(MomentSequence(m));
  CommandOutput out;
  out.tolerances["order_cap"] = flavor_order_cap(Flavor::Classical);
  out.result["order"] = mapped.order();
  out.result["moments"] = mapped.values;
  return out;
}

CommandOutput do_mixed_moment(const Json& payload) {
  const std::string flavor = as_string(member(payload, "flavor"), "flavor");
  if (flavor != "tensor" && flavor != "free") {
    fail_schema("flavor", "must be one of tensor, free");
  }
  const Json& word_json = member(payload, "word");
  if (!word_json.is_array()) fail_schema("word", "must be an array of [family, generator] pairs");
  Word word;
  for (std::size_t i = 0; i < word_json.size(); ++i) {
    const std::string path = "word[" + std::to_string(i) + "]";
    const Json& pair = word_json[i];
    if (!pair.is_array() || pair.size() != 2) fail_schema(path, "must be a [family, generator] pair");
    word.push_back({as_int(pair[0], path + "[0]"), as_int(pair[1], path + "[1]")});
  }
  const Json& marginals = member(payload, "marginals");
  if (!marginals.is_array() || marginals.empty()) {
    fail_schema("marginals", "must be a non-empty array of marginal laws");
  }
  std::vector<MarginalLaw> laws;
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const std::string path = "marginals[" + std::to_string(i) + "]";
    const Json& entry = marginals[i];
    const int family = as_int(member(entry, "family"), path + ".family");
    const Json& moments = member(entry, "moments");
    if (!moments.is_array()) fail_schema(path + ".moments", "must be an array of {word, value}");
    std::map<std::vector<int>, Complex> table;
    for (std::size_t k = 0; k < moments.size(); ++k) {
      const std::string mpath = path + ".moments[" + std::to_string(k) + "]";
      const Json& mentry = moments[k];
      const Json& mword = member(mentry, "word");
      if (!mword.is_array()) fail_schema(mpath + ".word", "must be an array of generator indices");
      std::vector<int> generators;
      for (std::size_t j = 0; j < mword.size(); ++j) {
        generators.push_back(as_int(mword[j], mpath + ".word[" + std::to_string(j) + "]"));
      }
      table[generators] = as_complex(member(mentry, "value"), mpath + ".value");
    }
    laws.emplace_back(family, std::move(table));
  }
  const Complex value = flavor == "free" ? free_mixed_moment(word, laws)
                                         : tensor_mixed_moment(word, laws);
  CommandOutput out;
  out.tolerances["word_cap"] = kDefaultWordCap;
  out.result["re"] = value.real();
  out.result["im"] = value.imag();
  return out;
}

FockOperator parse_operator_terms(const Json& terms, const std::string& path,
                                  const FreeEmbedding& emb, const std::vector<int>& dims) {
  if (!terms.is_array() || terms.empty()) {
    fail_schema(path, "must be a non-empty array of operator terms");
  }
  FockOperator op = zero_operator(emb.space());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string tpath = path + "[" + std::to_string(k) + "]";
    const Json& term = terms[k];
    const std::string kind = as_string(member(term, "kind"), tpath + ".kind");
    if (kind == "identity") {
      op = op + identity_operator(emb.space());
      continue;
    }
    if (kind == "scalar") {
      op = op + scalar_operator(emb.space(), as_complex(member(term, "value"), tpath + ".value"));
      continue;
    }
    if (kind != "creation" && kind != "annihilation" && kind != "conservation") {
      fail_schema(tpath + ".kind",
                  "must be one of creation, annihilation, conservation, identity, scalar");
    }
    const int factor = as_int(member(term, "factor"), tpath + ".factor");
    if (factor < 0 || factor >= static_cast<int>(dims.size())) {
      fail_schema(tpath + ".factor",
                  "must index a factor in [0, " + std::to_string(dims.size()) + ")");
    }
    const int dim = dims[static_cast<std::size_t>(factor)];
    if (kind == "conservation") {
      const Json& rows = member(term, "matrix");
      if (!rows.is_array() || rows.size() != static_cast<std::size_t>(dim)) {
        fail_schema(tpath + ".matrix", "must be a " + std::to_string(dim) + " x " +
                                           std::to_string(dim) + " array");
      }
      CMatrix x = CMatrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        const std::string rpath = tpath + ".matrix[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
          fail_schema(rpath, "must have length " + std::to_string(dim));
        }
        for (int j = 0; j < dim; ++j) {
          x(i, j) = as_complex(row[static_cast<std::size_t>(j)],
                               rpath + "[" + std::to_string(j) + "]");
        }
      }
      op = op + emb.conservation(factor, x);
      continue;
    }
    const Json& entries = member(term, "vector");
    const std::string vpath = tpath + ".vector";
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim)) {
      fail_schema(vpath, "must have length " + std::to_string(dim));
    }
    CVector u = CVector::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      u(i) = as_complex(entries[static_cast<std::size_t>(i)],
                        vpath + "[" + std::to_string(i) + "]");
    }
    op = op + (kind == "creation" ? emb.creation(factor, u) : emb.annihilation(factor, u));
  }
  return op;
}

CommandOutput do_fock_oracle(const Json& payload) {
  const Json& dims_json = member(payload, "dims");
  if (!dims_json.is_array() || dims_json.empty()) {
    fail_schema("dims", "must be a non-empty array of factor dimensions");
  }
  std::vector<int> dims;
  for (std::size_t i = 0; i < dims_json.size(); ++i) {
    const int d = as_int(dims_json[i], "dims[" + std::to_string(i) + "]");
    if (d < 0) fail_schema("dims[" + std::to_string(i) + "]", "must be nonnegative");
    dims.push_back(d);
  }
  const int depth = as_int(member(payload, "depth"), "depth");
  if (depth < 0) fail_schema("depth", "must be nonnegative");
  const FreeEmbedding emb(dims, depth);

  const Json& ops_json = member(payload, "operators");
  if (!ops_json.is_array() || ops_json.empty()) {
    fail_schema("operators", "must be a non-empty array of operator definitions");
  }
  std::vector<FockOperator> defined;
  for (std::size_t i = 0; i < ops_json.size(); ++i) {
    defined.push_back(
        parse_operator_terms(ops_json[i], "operators[" + std::to_string(i) + "]", emb, dims));
  }

  const Json& word_json = member(payload, "word");
  if (!word_json.is_array()) fail_schema("word", "must be an array of operator indices");
  std::vector<FockOperator> word;
  for (std::size_t i = 0; i < word_json.size(); ++i) {
    const int index = as_int(word_json[i], "word[" + std::to_string(i) + "]");
    if (index < 0 || index >= static_cast<int>(defined.size())) {
      fail_schema("word[" + std::to_string(i) + "]",
                  "must index an operator in [0, " + std::to_string(defined.size()) + ")");
    }
    word.push_back(defined[static_cast<std::size_t>(index)]);
  }
  const Complex value = vacuum_expectation(word);
  CommandOutput out;
  out.tolerances["basis_cap"] = default_basis_cap();
  out.result["re"] = value.real();
  out.result["im"] = value.imag();
  return out;
}

CommandOutput do_levy_moments(const Json& payload) {
  const auto tuple = parse_tuple(member(payload, "tuple"), "tuple");
  const double t = as_number(member(payload, "t"), "t");
  const int order = as_int(member(payload, "order"), "order");
  const Flavor flavor = payload.contains("flavor") ? flavor_from(payload, "flavor")
                                                   : Flavor::Free;
  const auto kappa = tuple_cumulants(tuple, t, flavor, order);
  const auto moments = cumulants_to_moments(kappa);
  CommandOutput out;
  out.tolerances["real_part"] = 1e-12;
  out.tolerances["order_cap"] = flavor_order_cap(flavor);
  out.result["flavor"] = flavor_name(flavor);
  out.result["order"] = order;
  out.result["cumulants"] = kappa.values;
  out.result["moments"] = moments.values;
  return out;
}

CommandOutput do_classify(const Json& payload) {
  const auto tuple = parse_tuple(member(payload, "tuple"), "tuple");
  const ProcessClass cls = classify(tuple);
  CommandOutput out;
  out.tolerances["rank"] = 1e-10;
  out.tolerances["residual"] = 1e-9;
  out.result["class"] = process_class_name(cls);
  out.result["minimal_dimension"] = minimal_tuple(tuple).d;
  return out;
}

CommandOutput do_ito_split(const Json& payload) {
  const auto tuple = parse_tuple(member(payload, "tuple"), "tuple");
  const auto split = ito_levy_split(tuple);
  CommandOutput out;
  out.tolerances["rank"] = 1e-10;
  out.tolerances["real_part"] = 1e-12;
  out.result["gaussian"] = tuple_to_json(split.gaussian, "gaussian");
  out.result["jump"] = tuple_to_json(split.jump, "jump");
  out.result["exact"] = split.exact;
  return out;
}

CommandOutput do_minimal(const Json& payload) {
  const auto tuple = parse_tuple(member(payload, "tuple"), "tuple");
  const auto reduced = minimal_tuple(tuple);
  CommandOutput out;
  out.tolerances["rank"] = 1e-10;
  out.result = tuple_to_json(reduced, "minimal");
  return out;
}

CommandOutput do_azema(const Json& payload) {
  const double gamma_re = as_number(member(payload, "gamma_re"), "gamma_re");
  const double gamma_im =
      payload.contains("gamma_im") ? as_number(payload["gamma_im"], "gamma_im") : 0.0;
  const double t = as_number(member(payload, "t"), "t");
  const int steps = as_int(member(payload, "steps"), "steps");
  const int depth = as_int(member(payload, "depth"), "depth");
  const int max_order = as_int(member(payload, "max_order"), "max_order");
  const bool converge =
      payload.contains("converge") ? as_bool(payload["converge"], "converge") : false;
  const Complex gamma{gamma_re, gamma_im};

  CommandOutput out;
  out.tolerances["real_part"] = 1e-12;
  out.tolerances["basis_cap"] = default_basis_cap();

  const auto moments = azema_free_moments(gamma, t, steps, depth, max_order);
  Json table = Json::object();
  for (const auto& [order, value] : moments) {
    table["order_" + std::to_string(order)] = value;
  }
  out.result["moments"] = std::move(table);

  if (converge) {
    out.tolerances["convergence_ratio"] = 1.5;
    const auto report = azema_convergence(gamma, t, depth, max_order);
    Json conv;
    conv["step_counts"] = report.step_counts;
    Json orders = Json::object();
    for (const auto& [order, values] : report.moments) {
      Json entry;
      entry["values"] = values;
      const double ratio = report.min_ratio.at(order);
      if (std::isinf(ratio)) {
        entry["min_ratio"] = "inf";
      } else {
        entry["min_ratio"] = ratio;
      }
      orders["order_" + std::to_string(order)] = std::move(entry);
    }
    conv["orders"] = std::move(orders);
    conv["converged"] = report.converged;
    out.result["convergence"] = std::move(conv);
  }
  return out;
}

CommandOutput do_check(const Json& payload) {
  const std::string filter =
      payload.contains("filter") ? as_string(payload["filter"], "filter") : "";
  const double perturbation = payload.contains("inject_perturbation")
                                  ? as_number(payload["inject_perturbation"], "inject_perturbation")
                                  : 0.0;
  const auto report = check_suite(filter, perturbation);
  CommandOutput out;
  out.tolerances["per_check"] = "listed per entry in result.checks";
  Json checks = Json::array();
  for (const auto& r : report.results) {
    Json entry;
    entry["name"] = r.name;
    entry["passed"] = r.passed;
    entry["max_deviation"] = r.max_deviation;
    entry["tolerance"] = r.tolerance;
    entry["detail"] = r.detail;
    checks.push_back(std::move(entry));
  }
  out.result["all_passed"] = report.all_passed();
  out.result["checks"] = std::move(checks);
  return out;
}

CommandOutput run_command(const std::string& command, const Json& payload) {
  if (command == "cumulants") return do_cumulants(payload);
  if (command == "convolve") return do_convolve(payload);
  if (command == "bp-map") return do_bp_map(payload);
  if (command == "mixed-moment") return do_mixed_moment(payload);
  if (command == "fock-oracle") return do_fock_oracle(payload);
  if (command == "levy-moments") return do_levy_moments(payload);
  if (command == "classify") return do_classify(payload);
  if (command == "ito-split") return do_ito_split(payload);
  if (command == "minimal") return do_minimal(payload);
  if (command == "azema") return do_azema(payload);
  if (command == "check") return do_check(payload);
  fail_schema("command",
              "must be one of cumulants, convolve, bp-map, mixed-moment, fock-oracle, "
              "levy-moments, classify, ito-split, minimal, azema, check");
}

std::string csv_escape(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void flatten(const Json& v, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
    }
  } else if (v.is_array()) {
    std::size_t i = 0;
    for (const auto& value : v) {
      flatten(value, prefix + "[" + std::to_string(i++) + "]", rows);
    }
  } else {
    rows.emplace_back(prefix, v.is_string() ? v.get<std::string>() : v.dump());
  }
}

std::string to_csv(const Json& envelope) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(envelope, "", rows);
  std::string out = "key,value\n";
  for (const auto& [key, value] : rows) {
    out += csv_escape(key);
    out += ',';
    out += csv_escape(value);
    out += '\n';
  }
  return out;
}

}  // namespace

JobOutcome run_job(const JobRequest& request) {
  JobOutcome out;
  try {
    if (request.format != "json" && request.format != "csv") {
      fail_schema("format", "must be one of json, csv");
    }
    const CommandOutput computed = run_command(request.command, request.payload);
    Json envelope;
    envelope["command"] = request.command;
    envelope["version"] = kVersion;
    envelope["inputs"] = request.payload;
    envelope["tolerances"] = computed.tolerances;
    envelope["result"] = computed.result;
    out.body = request.format == "csv" ? to_csv(envelope) : envelope.dump(2) + "\n";
    if (request.command == "check" && !computed.result["all_passed"].get<bool>()) {
      out.exit_code = 4;
      out.message = "one or more consistency checks failed";
    }
  } catch (const SchemaError& e) {
    out.exit_code = 2;
    out.message = e.what();
  } catch (const SizeLimitError& e) {
    out.exit_code = 3;
    out.message = e.what();
  } catch (const ContractError& e) {
    out.exit_code = 4;
    out.message = e.what();
  } catch (const Error& e) {
    out.exit_code = 2;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.message = e.what();
  }
  return out;
}

}  // namespace ncp
