#include "ncp/job.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "ncp/version.hpp"

using ncp::JobOutcome;
using ncp::JobRequest;
using ncp::Json;
using ncp::run_job;

namespace {

JobOutcome run(const std::string& command, const Json& payload,
               const std::string& format = "json") {
  return run_job(JobRequest{command, payload, format});
}

Json parse_body(const JobOutcome& out) {
  REQUIRE(out.exit_code == 0);
  return Json::parse(out.body);
}

}  // namespace

TEST_CASE("free convolution of two semicircles") {
  const Json payload = {{"flavor", "free"},
                        {"m1", {0.0, 1.0, 0.0, 2.0}},
                        {"m2", {0.0, 1.0, 0.0, 2.0}}};
  const auto out = run("convolve", payload);
  const Json body = parse_body(out);
  CHECK(body["command"] == "convolve");
  CHECK(body["version"] == ncp::kVersion);
  CHECK(body["inputs"] == payload);
  const auto moments = body["result"]["moments"].get<std::vector<double>>();
  CHECK(moments == std::vector<double>{0.0, 2.0, 0.0, 8.0});
}

TEST_CASE("bp-map sends Poisson moments to free Poisson moments") {
  const auto out = run("bp-map", Json{{"m", {1.0, 2.0, 5.0, 15.0}}});
  const auto moments = parse_body(out)["result"]["moments"].get<std::vector<double>>();
  CHECK(moments == std::vector<double>{1.0, 2.0, 5.0, 14.0});
}

TEST_CASE("schema violations exit 2 and name the offending field") {
  SUBCASE("empty moment list") {
    const auto out = run("cumulants", Json{{"flavor", "classical"}, {"m", Json::array()}});
    CHECK(out.exit_code == 2);
    CHECK(out.message.find("'m'") != std::string::npos);
  }
  SUBCASE("missing flavor") {
    const auto out = run("cumulants", Json{{"m", {1.0}}});
    CHECK(out.exit_code == 2);
    CHECK(out.message.find("'flavor'") != std::string::npos);
  }
  SUBCASE("unknown command") {
    const auto out = run("transmogrify", Json::object());
    CHECK(out.exit_code == 2);
    CHECK(out.message.find("'command'") != std::string::npos);
  }
  SUBCASE("unknown format") {
    const auto out = run("bp-map", Json{{"m", {1.0}}}, "xml");
    CHECK(out.exit_code == 2);
    CHECK(out.message.find("'format'") != std::string::npos);
  }
  SUBCASE("non-integer step count") {
    const Json payload = {{"gamma_re", 1.0}, {"t", 1.0},          {"steps", 2.5},
                          {"depth", 4},      {"max_order", 4}};
    const auto out = run("azema", payload);
    CHECK(out.exit_code == 2);
    CHECK(out.message.find("'steps'") != std::string::npos);
  }
  SUBCASE("tuple vector of wrong length") {
    const Json payload = {{"tuple",
                           {{"d", 2},
                            {"T", {{0.0, 0.0}, {0.0, 1.0}}},
                            {"u", {1.0}},
                            {"v", {1.0, 1.0}},
                            {"lambda", 0.0}}}};
    const auto out = run("minimal", payload);
    CHECK(out.exit_code == 2);
    CHECK(out.message.find("'tuple.u'") != std::string::npos);
  }
}

TEST_CASE("size caps exit 3") {
  const Json payload = {{"gamma_re", 0.5}, {"t", 1.0},           {"steps", 1000},
                        {"depth", 12},     {"max_order", 12}};
  const auto out = run("azema", payload);
  CHECK(out.exit_code == 3);
  CHECK_FALSE(out.message.empty());
}

TEST_CASE("identical requests produce identical bytes") {
  const Json payload = {{"gamma_re", 0.5}, {"gamma_im", 0.25}, {"t", 1.0},
                        {"steps", 4},      {"depth", 4},       {"max_order", 4}};
  const auto first = run("azema", payload);
  const auto second = run("azema", payload);
  REQUIRE(first.exit_code == 0);
  CHECK(first.body == second.body);

  const auto csv1 = run("azema", payload, "csv");
  const auto csv2 = run("azema", payload, "csv");
  CHECK(csv1.body == csv2.body);
  CHECK(csv1.body != first.body);
}

TEST_CASE("every emitted JSON body re-parses with the envelope keys in order") {
  const std::vector<JobRequest> requests = {
      {"cumulants", Json{{"flavor", "boolean"}, {"m", {1.0, 3.0, 9.0}}}, "json"},
      {"bp-map", Json{{"m", {0.0, 1.0, 0.0, 3.0, 0.0, 15.0}}}, "json"},
      {"classify",
       Json{{"tuple",
             {{"d", 1}, {"T", {{0.0}}}, {"u", {1.0}}, {"v", {1.0}}, {"lambda", 0.0}}}},
       "json"},
  };
  for (const auto& request : requests) {
    const auto out = run_job(request);
    REQUIRE(out.exit_code == 0);
    const Json body = Json::parse(out.body);
    REQUIRE(body.is_object());
    const std::vector<std::string> keys = {"command", "version", "inputs", "tolerances",
                                           "result"};
    std::size_t pos = 0;
    for (const auto& key : keys) {
      REQUIRE(body.contains(key));
      const auto at = out.body.find("\"" + key + "\"");
      REQUIRE(at != std::string::npos);
      CHECK(at >= pos);
      pos = at;
    }
  }
}

TEST_CASE("csv output flattens the envelope under a key,value header") {
  const auto out = run("bp-map", Json{{"m", {1.0, 2.0, 5.0, 15.0}}}, "csv");
  REQUIRE(out.exit_code == 0);
  CHECK(out.body.rfind("key,value\n", 0) == 0);
  CHECK(out.body.find("command,bp-map\n") != std::string::npos);
  CHECK(out.body.find("inputs.m[3],15.0\n") != std::string::npos);
  CHECK(out.body.find("result.moments[3],14.0\n") != std::string::npos);
}

TEST_CASE("levy-moments reports cumulants and moments of the tuple") {
  const Json payload = {
      {"tuple", {{"d", 1}, {"T", {{1.0}}}, {"u", {1.0}}, {"v", {1.0}}, {"lambda", 1.0}}},
      {"t", 1.0},
      {"order", 4}};
  const Json body = parse_body(run("levy-moments", payload));
  const auto kappa = body["result"]["cumulants"].get<std::vector<double>>();
  const auto moments = body["result"]["moments"].get<std::vector<double>>();
  REQUIRE(kappa.size() == 4);
  REQUIRE(moments.size() == 4);
  const std::vector<double> free_poisson = {1.0, 2.0, 5.0, 14.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(kappa[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moments[i] == doctest::Approx(free_poisson[i]).epsilon(1e-12));
  }
  CHECK(body["result"]["flavor"] == "free");
}

TEST_CASE("classify and minimal report the reduced tuple") {
  const Json tuple = {{"d", 1}, {"T", {{1.0}}}, {"u", {1.0}}, {"v", {1.0}}, {"lambda", 1.0}};
  const Json classified = parse_body(run("classify", Json{{"tuple", tuple}}));
  CHECK(classified["result"]["class"] == "compound-poisson");
  CHECK(classified["result"]["minimal_dimension"] == 1);

  const Json padded_tuple = {{"d", 3},
                             {"T", {{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}}},
                             {"u", {1.0, 0.0, 0.0}},
                             {"v", {1.0, 0.0, 0.0}},
                             {"lambda", 0.5}};
  const Json reduced = parse_body(run("minimal", Json{{"tuple", padded_tuple}}));
  CHECK(reduced["result"]["d"] == 1);
  CHECK(reduced["result"]["lambda"] == 0.5);
}

TEST_CASE("ito-split emits both parts and the exactness flag") {
  const Json payload = {{"tuple",
                         {{"d", 2},
                          {"T", {{0.0, 0.0}, {0.0, 1.0}}},
                          {"u", {1.0, 1.0}},
                          {"v", {1.0, 1.0}},
                          {"lambda", 2.0}}}};
  const Json body = parse_body(run("ito-split", payload));
  CHECK(body["result"]["exact"] == true);
  CHECK(body["result"]["gaussian"]["d"] == 1);
  CHECK(body["result"]["gaussian"]["u"][0].get<double>() == doctest::Approx(1.0));
  CHECK(body["result"]["gaussian"]["lambda"].get<double>() == doctest::Approx(1.0));
  CHECK(body["result"]["jump"]["u"][1].get<double>() == doctest::Approx(1.0));
  CHECK(body["result"]["jump"]["u"][0].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("mixed-moment evaluates the four-point word") {
  const Json payload = {
      {"flavor", "free"},
      {"word", {{1, 1}, {2, 1}, {1, 1}, {2, 1}}},
      {"marginals",
       {{{"family", 1},
         {"moments", {{{"word", {1}}, {"value", 1.0}}, {{"word", {1, 1}}, {"value", 2.0}}}}},
        {{"family", 2},
         {"moments", {{{"word", {1}}, {"value", 1.0}}, {{"word", {1, 1}}, {"value", 3.0}}}}}}}};
  const Json body = parse_body(run("mixed-moment", payload));
  CHECK(body["result"]["re"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(body["result"]["im"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fock-oracle evaluates a vacuum expectation") {
  const Json payload = {
      {"dims", {1}},
      {"depth", 2},
      {"operators",
       {{{{"kind", "creation"}, {"factor", 0}, {"vector", {1.0}}},
         {{"kind", "annihilation"}, {"factor", 0}, {"vector", {1.0}}}}}},
      {"word", {0, 0}}};
  const Json body = parse_body(run("fock-oracle", payload));
  CHECK(body["result"]["re"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(body["result"]["im"].get<double>() == 0.0);
}

TEST_CASE("azema golden values and convergence table") {
  const Json payload = {{"gamma_re", 0.5}, {"t", 1.0},          {"steps", 2},
                        {"depth", 4},      {"max_order", 4},    {"converge", true}};
  const Json body = parse_body(run("azema", payload));
  const auto& moments = body["result"]["moments"];
  CHECK(moments["order_2"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moments["order_4"].get<double>() == doctest::Approx(1.8125).epsilon(1e-12));
  CHECK(moments["order_1"].get<double>() == 0.0);
  CHECK(moments["order_3"].get<double>() == 0.0);

  const auto& convergence = body["result"]["convergence"];
  CHECK(convergence["step_counts"].get<std::vector<int>>() == std::vector<int>{4, 8, 16, 32});
  CHECK(convergence["converged"] == true);
  const auto& order4 = convergence["orders"]["order_4"];
  REQUIRE(order4["values"].size() == 4);
  CHECK(order4["min_ratio"].get<double>() >= 1.5);
  CHECK(convergence["orders"]["order_1"]["min_ratio"] == "inf");
}

TEST_CASE("check command maps suite failures to exit 4") {
  const auto pass = run("check", Json{{"filter", "partitions"}});
  REQUIRE(pass.exit_code == 0);
  CHECK(Json::parse(pass.body)["result"]["all_passed"] == true);

  const auto fail = run("check", Json{{"filter", "partitions"}, {"inject_perturbation", 1.0}});
  CHECK(fail.exit_code == 4);
  REQUIRE_FALSE(fail.body.empty());
  CHECK(Json::parse(fail.body)["result"]["all_passed"] == false);
}
