#include "growcut/service.hpp"

#include <httplib.h>

#include "growcut/contour.hpp"
#include "growcut/io.hpp"
#include "growcut/metrics.hpp"

namespace growcut::service {

using nlohmann::json;

namespace {

// Malformed request; answered with 400.
struct BadRequest : Error {
  using Error::Error;
};

Reply error_reply(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

json parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw BadRequest("request body is not valid JSON");
  if (!j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw BadRequest(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string string_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw BadRequest(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

GrayImage decode_b64_image(const json& j, const char* name) {
  try {
    const auto bytes = io::base64_decode(string_field(j, name));
    return io::decode_image(bytes);
  } catch (const BadRequest&) {
    throw;
  } catch (const Error& e) {
    throw BadRequest(std::string("field '") + name + "': " + e.what());
  }
}

MethodConfig params_of(const json& j, const MethodConfig& defaults) {
  if (!j.contains("params")) return defaults;
  try {
    return config_from_json(j.at("params"), defaults);
  } catch (const InvalidArgument& e) {
    throw BadRequest(std::string("params: ") + e.what());
  }
}

SeedSet seeds_of(const json& j) {
  if (!j.contains("seeds")) return {};
  try {
    return io::seeds_from_json(j.at("seeds"));
  } catch (const Error& e) {
    throw BadRequest(std::string("seeds: ") + e.what());
  }
}

json metrics_json(const metrics::MetricsReport& r) {
  json errors = json::object();
  for (const auto& [k, v] : r.relative_errors) errors[k] = v;
  return {{"dsc", r.overlap.dsc},
          {"sensitivity", r.overlap.sensitivity},
          {"specificity", r.overlap.specificity},
          {"bac", r.overlap.bac},
          {"area", r.shape.area},
          {"perimeter", r.shape.perimeter},
          {"form_factor", r.shape.form_factor},
          {"solidity", r.shape.solidity},
          {"feret_x", r.shape.feret_x},
          {"feret_y", r.shape.feret_y},
          {"relative_errors", errors},
          {"ssp_pvalue", r.ssp_pvalue},
          {"ssp_reject", r.ssp_reject}};
}

template <typename F>
Reply guarded(F&& f) {
  try {
    return f();
  } catch (const BadRequest& e) {
    return error_reply(400, e.what());
  } catch (const SeedError& e) {
    return error_reply(422, e.what());
  } catch (const NoCandidateError& e) {
    return error_reply(422, e.what());
  } catch (const InvalidArgument& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

}  // namespace

Reply handle_segment(std::string_view body, const MethodConfig& defaults) {
  return guarded([&]() -> Reply {
    const json j = parse_body(body);
    const GrayImage img = decode_b64_image(j, "image");
    Method method;
    try {
      method = method_from_string(string_field(j, "method"));
    } catch (const InvalidArgument& e) {
      throw BadRequest(e.what());
    }
    const MethodConfig cfg = params_of(j, defaults);
    const SeedSet seeds = seeds_of(j);
    std::optional<BinaryMask> gt;
    if (j.contains("ground_truth")) {
      gt = io::image_to_mask(decode_b64_image(j, "ground_truth"));
      if (gt->extent() != img.extent()) throw BadRequest("ground_truth size differs from image");
    }

    if (method != Method::Ssgc) {
      if (seeds.count(Label::Foreground) == 0) throw SeedError("no foreground seed");
      seeds.check_bounds(img.extent());
    }
    const SegmentationResult r = segment(method, img, seeds, cfg);

    json contour = json::array();
    for (const Point& p : boundary_polyline(r.mask)) contour.push_back({p.x, p.y});
    json out{{"mask", io::base64_encode(io::encode_png(io::mask_to_image(r.mask)))},
             {"contour", contour},
             {"iterations", r.iterations_used},
             {"converged", r.converged}};
    if (gt) out["metrics"] = metrics_json(metrics::evaluate(img, r.mask, *gt, cfg.significance));
    return {200, out.dump()};
  });
}

Reply handle_autoseed(std::string_view body, const MethodConfig& defaults) {
  return guarded([&]() -> Reply {
    const json j = parse_body(body);
    const GrayImage img = decode_b64_image(j, "image");
    const std::string strategy = string_field(j, "strategy");
    const MethodConfig cfg = params_of(j, defaults);
    SeedSet seeds;
    if (strategy == "mlt") {
      seeds = mlt::generate_seeds(img, cfg.mlt, cfg.diffusion, cfg.seeding);
    } else if (strategy == "de") {
      seeds = de::generate_seeds(img, cfg.de);
    } else {
      throw BadRequest("unknown strategy '" + strategy + "'");
    }
    return {200, json{{"seeds", io::seeds_to_json(seeds)}}.dump()};
  });
}

Reply handle_health() { return {200, "ok", "text/plain"}; }

void register_routes(httplib::Server& server, const MethodConfig& defaults) {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Post("/segment", [defaults, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_segment(req.body, defaults));
  });
  server.Post("/autoseed", [defaults, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_autoseed(req.body, defaults));
  });
  server.Get("/health", [send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_health());
  });
}

void serve(const std::string& host, int port, const MethodConfig& defaults) {
  httplib::Server server;
  register_routes(server, defaults);
  if (!server.bind_to_port(host, port))
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  server.listen_after_bind();
}

}  // namespace growcut::service
