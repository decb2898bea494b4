#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <thread>

#include "growcut/io.hpp"
#include "growcut/phantom.hpp"
#include "growcut/service.hpp"

using namespace growcut;
using nlohmann::json;

namespace {

std::string b64_png(const GrayImage& img) { return io::base64_encode(io::encode_png(img)); }

json request(const phantom::Phantom& ph, const SeedSet& seeds, const std::string& method) {
  return {{"image", b64_png(ph.image)}, {"seeds", io::seeds_to_json(seeds)}, {"method", method}};
}

BinaryMask mask_of(const json& reply) {
  return io::image_to_mask(io::decode_image(io::base64_decode(reply.at("mask").get<std::string>())));
}

}  // namespace

TEST_CASE("segment matches the library call") {
  const auto ph = phantom::make_phantom(phantom::Shape::Ellipse);
  const SeedSet seeds = phantom::placed_seeds(ph, 6, 6);
  const MethodConfig cfg;
  for (Method m : kAllMethods) {
    const SeedSet s = m == Method::Fuzzy ? foreground_only(seeds) : seeds;
    const auto reply = service::handle_segment(request(ph, s, std::string(to_string(m))).dump(), cfg);
    REQUIRE(reply.status == 200);
    const json j = json::parse(reply.body);
    const SegmentationResult direct = segment(m, ph.image, s, cfg);
    CHECK(mask_of(j) == direct.mask);
    CHECK(j.at("iterations") == direct.iterations_used);
    CHECK(j.at("converged") == direct.converged);
    CHECK(j.at("contour").size() > 0);
    CHECK_FALSE(j.contains("metrics"));
  }
}

TEST_CASE("segment with ground truth and params") {
  const auto ph = phantom::make_phantom(phantom::Shape::Disc);
  json req = request(ph, phantom::placed_seeds(ph, 6, 6), "growcut");
  req["ground_truth"] = b64_png(io::mask_to_image(ph.truth));
  req["params"] = {{"growcut", {{"max_iterations", 1}}}};
  const auto reply = service::handle_segment(req.dump(), {});
  REQUIRE(reply.status == 200);
  const json j = json::parse(reply.body);
  CHECK(j.at("iterations") == 1);
  CHECK(j.at("converged") == false);
  CHECK(j.at("metrics").at("dsc").get<double>() < 1.0);
  CHECK(j.at("metrics").contains("relative_errors"));
}

TEST_CASE("segment error statuses") {
  const auto ph = phantom::make_phantom(phantom::Shape::Disc);
  const SeedSet bg_only({{{0, 0}, Label::Background}});
  CHECK(service::handle_segment(request(ph, bg_only, "growcut").dump(), {}).status == 422);
  CHECK(service::handle_segment(request(ph, {}, "regiongrow").dump(), {}).status == 422);
  CHECK(service::handle_segment(request(ph, SeedSet({{{500, 0}, Label::Foreground}}), "growcut").dump(), {}).status == 422);
  CHECK(service::handle_segment(request(ph, phantom::placed_seeds(ph, 2, 2), "fuzzy").dump(), {}).status == 422);
  CHECK(service::handle_segment("{", {}).status == 400);
  CHECK(service::handle_segment("[]", {}).status == 400);
  CHECK(service::handle_segment(request(ph, bg_only, "graphcut").dump(), {}).status == 400);
  json bad_img = request(ph, bg_only, "growcut");
  bad_img["image"] = "!!!";
  CHECK(service::handle_segment(bad_img.dump(), {}).status == 400);
  json bad_params = request(ph, phantom::placed_seeds(ph, 2, 2), "growcut");
  bad_params["params"] = {{"growcut", {{"nope", 1}}}};
  CHECK(service::handle_segment(bad_params.dump(), {}).status == 400);
  json no_method = request(ph, bg_only, "growcut");
  no_method.erase("method");
  const auto r = service::handle_segment(no_method.dump(), {});
  CHECK(r.status == 400);
  CHECK(json::parse(r.body).contains("error"));
  // ssgc generates its own seeds; a dark frame has no candidate
  const json dark{{"image", b64_png(GrayImage(16, 16, std::uint8_t{0}))}, {"method", "ssgc"}};
  CHECK(service::handle_segment(dark.dump(), {}).status == 422);
}

TEST_CASE("autoseed") {
  const auto ph = phantom::make_phantom(phantom::Shape::Disc);
  const MethodConfig cfg;
  for (const char* strategy : {"mlt", "de"}) {
    const json req{{"image", b64_png(ph.image)}, {"strategy", strategy}};
    const auto reply = service::handle_autoseed(req.dump(), cfg);
    REQUIRE(reply.status == 200);
    const SeedSet got = io::seeds_from_json(json::parse(reply.body).at("seeds"));
    const SeedSet want = std::string(strategy) == "mlt" ? mlt::generate_seeds(ph.image) : de::generate_seeds(ph.image);
    CHECK(got == want);
  }
  const json bad{{"image", b64_png(ph.image)}, {"strategy", "random"}};
  CHECK(service::handle_autoseed(bad.dump(), cfg).status == 400);
}

TEST_CASE("health") {
  const auto r = service::handle_health();
  CHECK(r.status == 200);
  CHECK(r.body == "ok");
  CHECK(r.content_type == "text/plain");
}

TEST_CASE("routes over localhost") {
  httplib::Server server;
  service::register_routes(server, {});
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->body == "ok");

  const auto ph = phantom::make_phantom(phantom::Shape::Star);
  const SeedSet seeds = phantom::placed_seeds(ph, 6, 6);
  const auto res = client.Post("/segment", request(ph, seeds, "growcut").dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(mask_of(json::parse(res->body)) == run(ph.image, seeds).mask);

  const auto bad = client.Post("/segment", request(ph, {}, "growcut").dump(), "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);

  server.stop();
  t.join();
}
