#pragma once

#include <string>
#include <string_view>

#include "growcut/config.hpp"

namespace httplib {
class Server;
}

namespace growcut::service {

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// `POST /segment`:
/// `{"image": base64 PNG/PGM, "seeds": [...], "method": "growcut"|"fuzzy"|"ssgc"|"regiongrow",
///   "params": {config blocks}, "ground_truth": base64 mask (optional)}`
/// -> `{"mask": base64 PNG, "contour": [[x, y], ...], "iterations": n,
///      "converged": bool, "metrics": {...} (with ground_truth)}`.
/// Malformed input answers 400; unusable seeds or no mass candidate 422.
Reply handle_segment(std::string_view body, const MethodConfig& defaults);

/// `POST /autoseed`: `{"image", "strategy": "mlt"|"de", "params"}` -> `{"seeds": [...]}`.
Reply handle_autoseed(std::string_view body, const MethodConfig& defaults);

/// Plain-text "ok".
Reply handle_health();

/// Routes /segment, /autoseed and /health onto `server`.
void register_routes(httplib::Server& server, const MethodConfig& defaults);

/// Blocks serving on host:port. Throws IoError when the address cannot be bound.
void serve(const std::string& host, int port, const MethodConfig& defaults);

}  // namespace growcut::service
