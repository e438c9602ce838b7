#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <thread>

#include "homvcp/io.hpp"
#include "homvcp/service.hpp"
#include "support.hpp"

using namespace homvcp;
using nlohmann::json;

namespace {

const std::map<std::string, std::string> kNoQuery;

EngineConfig fast_config() {
  EngineConfig c;
  c.execution = Execution::Serial;
  return c;
}

ServiceResponse post(Service& s, const std::string& path, const json& body) {
  return s.handle("POST", path, kNoQuery, body.dump());
}

ServiceResponse get(Service& s, const std::string& path, const std::map<std::string, std::string>& q = {}) {
  return s.handle("GET", path, q, "");
}

std::string new_session(Service& s) {
  const ServiceResponse r = post(s, "/sessions", {{"builtin", "parabola2d"}});
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

json run(Service& s, const std::string& id, double delta, std::vector<double> center, double radius) {
  const ServiceResponse r =
      post(s, "/sessions/" + id + "/approximate", {{"delta", delta}, {"center", center}, {"radius", radius}, {"wait", true}});
  REQUIRE(r.status == 200);
  return r.body;
}

void wait_done(Service& s, const std::string& id) {
  for (int k = 0; k < 2000; ++k) {
    const ServiceResponse st = get(s, "/sessions/" + id + "/status");
    if (st.body["state"] != "running") return;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  FAIL("run did not finish");
}

}  // namespace

TEST_CASE("sessions are created with distinct ids") {
  Service s(fast_config());
  const std::string a = new_session(s);
  const std::string b = new_session(s);
  CHECK(a != b);
  CHECK(get(s, "/sessions/" + a).status == 200);
  CHECK(post(s, "/sessions", json::parse(R"({"builtin":"parabola2d","cone":{"generators":[[1,0],[-1,0]]}})")).status == 400);
  CHECK(post(s, "/sessions", {{"builtin", "nope"}}).status == 400);
  CHECK(s.handle("POST", "/sessions", kNoQuery, "{not json").status == 400);
  CHECK(get(s, "/sessions/s999/status").status == 404);
  CHECK(get(s, "/nowhere").status == 404);
}

TEST_CASE("curve endpoint") {
  Service s(fast_config());
  const ServiceResponse r = get(s, "/curve", {{"delta", "0.1"}, {"count", "200"}});
  REQUIRE(r.status == 200);
  const auto& samples = r.body["samples"];
  CHECK(samples.size() == 200);
  CHECK(r.body["region_of_validity"].get<double>() == doctest::Approx(9.9499).epsilon(1e-4));
  for (std::size_t i = 1; i < samples.size(); ++i) {
    CHECK(samples[i]["r"].get<double>() > samples[i - 1]["r"].get<double>());
    CHECK(samples[i]["alpha"].get<double>() > samples[i - 1]["alpha"].get<double>());
  }
  CHECK(get(s, "/curve", {{"delta", "1.5"}}).status == 400);
  CHECK(get(s, "/curve", {{"delta", "abc"}}).status == 400);
  CHECK(get(s, "/curve").status == 400);
}

TEST_CASE("approximation summaries carry the error bound") {
  Service s(fast_config());
  const std::string id = new_session(s);
  const json a = run(s, id, 0.5, {0, 0}, 1.5);
  CHECK(std::abs(a["bound"].get<double>() - 14.0056) < 1e-3);
  CHECK(a["status"] == "Success");
  CHECK(a["run"] == 1);
  CHECK(a["far_points"].size() == 2);
  CHECK(a["vertices"].front() == a["vertices"].back());
  const json b = run(s, id, 0.1, {0, 0}, 5);
  CHECK(std::abs(b["bound"].get<double>() - 5.2527) < 1e-3);
  const json c = run(s, id, 0.1, {0, 0}, 11);
  CHECK_FALSE(c.contains("bound"));
  CHECK(c["bound_omitted"] == "OutOfValidity");
  CHECK(c["region_of_validity"].get<double>() < 11.0);

  const ServiceResponse h = get(s, "/sessions/" + id + "/history");
  REQUIRE(h.body["runs"].size() == 3);
  CHECK(get(s, "/sessions/" + id + "/result/2").body == b);
  CHECK(get(s, "/sessions/" + id + "/result/4").status == 404);
  CHECK(get(s, "/sessions/" + id + "/result/x").status == 400);

  CHECK(post(s, "/sessions/" + id + "/approximate", {{"delta", 1.5}, {"center", {0, 0}}, {"radius", 1}}).status == 400);
  CHECK(post(s, "/sessions/" + id + "/approximate", {{"delta", 0.5}, {"center", {0, 0, 0}}, {"radius", 1}}).status == 400);
  CHECK(post(s, "/sessions/" + id + "/approximate", {{"delta", 0.5}, {"radius", 1}}).status == 400);
}

TEST_CASE("asynchronous runs, polling and conflicts") {
  Service s(fast_config());
  const std::string id = new_session(s);
  const json req = {{"delta", 0.1}, {"center", {0, 0}}, {"radius", 5}};
  const ServiceResponse first = post(s, "/sessions/" + id + "/approximate", req);
  CHECK(first.status == 202);
  CHECK(first.body["run"] == 1);
  const ServiceResponse second = post(s, "/sessions/" + id + "/approximate", req);
  const ServiceResponse st = get(s, "/sessions/" + id + "/status");
  // the first run may already be over on a fast machine
  if (st.body["state"] == "running" || second.status == 409) CHECK(second.status == 409);
  wait_done(s, id);
  s.wait_idle();
  const ServiceResponse res = get(s, "/sessions/" + id + "/result/1");
  CHECK(res.status == 200);
  CHECK(res.body["status"] == "Success");
  CHECK(get(s, "/sessions/" + id + "/status").body["state"] == "done");
}

TEST_CASE("replaying a history reproduces the summaries") {
  Service s(fast_config());
  const std::string a = new_session(s);
  std::vector<json> first;
  first.push_back(run(s, a, 0.9, {0, -20}, 0.4));
  first.push_back(run(s, a, 0.5, {0, 0}, 1.5));

  Service fresh(fast_config());
  const std::string b = new_session(fresh);
  for (const auto& h : get(s, "/sessions/" + a + "/history").body["runs"]) {
    const json& rq = h["request"];
    const ServiceResponse r = post(fresh, "/sessions/" + b + "/approximate",
                                   {{"delta", rq["delta"]}, {"center", rq["center"]}, {"radius", rq["radius"]}, {"seed", rq["seed"]}, {"wait", true}});
    REQUIRE(r.status == 200);
    CHECK(r.body == first[static_cast<std::size_t>(h["run"].get<int>() - 1)]);
  }
}

TEST_CASE("concurrent sessions do not interact") {
  Service s;
  const std::string a = new_session(s);
  const std::string b = new_session(s);
  CHECK(post(s, "/sessions/" + a + "/approximate", {{"delta", 0.5}, {"center", {0, 0}}, {"radius", 1.5}}).status == 202);
  CHECK(post(s, "/sessions/" + b + "/approximate", {{"delta", 0.1}, {"center", {0, 0}}, {"radius", 5}}).status == 202);
  s.wait_idle();

  Service solo;
  const std::string c = new_session(solo);
  const json ra = run(solo, c, 0.5, {0, 0}, 1.5);
  const json rb = run(solo, c, 0.1, {0, 0}, 5);
  json got_a = get(s, "/sessions/" + a + "/result/1").body;
  json got_b = get(s, "/sessions/" + b + "/result/1").body;
  got_b["run"] = 2;
  CHECK(got_a == ra);
  CHECK(got_b == rb);
}

TEST_CASE("refinement") {
  Service s(fast_config());
  const std::string id = new_session(s);
  const ServiceResponse r = post(s, "/sessions/" + id + "/refine", {{"point", {0, -2}}, {"direction", {1, 1}}});
  REQUIRE(r.status == 200);
  CHECK(std::abs(r.body["image"][0].get<double>()) < 1e-5);
  CHECK(r.body["image"][1].get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(r.body["x"][0].get<double>()) < 1e-5);
  CHECK(r.body["t"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

  const ServiceResponse inside = post(s, "/sessions/" + id + "/refine", {{"point", {0, 3}}});
  REQUIRE(inside.status == 200);
  CHECK(inside.body["t"].get<double>() < 0.0);
  CHECK(inside.body.contains("note"));

  CHECK(post(s, "/sessions/" + id + "/refine", {{"point", {0, 3}}, {"direction", {-1, 0}}}).status == 400);

  const ServiceResponse flat = post(s, "/sessions", json::parse(R"({"m":2,"n":1,
      "objective":[{"var":0},{"sum":[{"square":{"var":0}},{"affine":{"coef":[0],"const":-1}}]}],
      "cone":{"generators":[[0,1]]}})"));
  REQUIRE(flat.status == 201);
  const std::string fid = flat.body["id"].get<std::string>();
  const ServiceResponse bad = post(s, "/sessions/" + fid + "/refine", {{"point", {0, -2}}});
  CHECK(bad.status == 422);
  CHECK(bad.body["error"] == "NonSolidCone");
}

TEST_CASE("summaries follow the interface schema") {
  const json api = read_json_file(fs::path(HOMVCP_SOURCE_DIR) / "schema" / "service_api.json");
  const json& schema = api["$defs"]["summary"];
  Service s(fast_config());
  const std::string id = new_session(s);
  const json sum = run(s, id, 0.5, {0, 0}, 1.5);
  for (const auto& key : schema["required"]) CHECK(sum.contains(key.get<std::string>()));
  for (const auto& [key, value] : sum.items()) CHECK(schema["properties"].contains(key));
  std::vector<std::string> paths;
  for (const auto& e : api["endpoints"]) paths.push_back(e["method"].get<std::string>() + " " + e["path"].get<std::string>());
  for (const char* p : {"POST /sessions", "GET /curve", "POST /sessions/{id}/approximate", "GET /sessions/{id}/status",
                        "GET /sessions/{id}/result/{k}", "POST /sessions/{id}/refine", "GET /sessions/{id}/history"})
    CHECK(std::find(paths.begin(), paths.end(), p) != paths.end());
}
