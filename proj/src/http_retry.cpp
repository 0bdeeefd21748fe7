#include "genmine/http_retry.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include <httplib.h>

namespace genmine {

std::chrono::milliseconds RetryPolicy::backoff(int retry) const {
  double ms = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, retry - 1);
  ms = std::min(ms, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

void Semaphore::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return permits_ > 0; });
  --permits_;
}

void Semaphore::release() {
  {
    std::lock_guard lock(mu_);
    ++permits_;
  }
  cv_.notify_one();
}

JsonPostClient::JsonPostClient(HttpClientConfig config)
    : config_(std::move(config)), in_flight_(config_.max_in_flight) {}

Result<nlohmann::json> JsonPostClient::post(const std::string& path, const nlohmann::json& body) {
  const std::string payload = body.dump();
  Error last{"unreachable", config_.base_url};

  in_flight_.acquire();
  struct Release {
    Semaphore& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  for (int attempt = 0; attempt <= config_.retry.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.retry.backoff(attempt));
    ++requests_;
    httplib::Client cli(config_.base_url);
    cli.set_connection_timeout(config_.connect_timeout);
    cli.set_read_timeout(config_.read_timeout);
    auto res = cli.Post(path, payload, "application/json");
    if (!res) {
      last = Error{"unreachable", httplib::to_string(res.error())};
      continue;
    }
    if (res->status != 200) {
      last = Error{"http-status", std::to_string(res->status)};
      continue;
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      return Error{"invalid-response", e.what()};
    }
  }
  return Error{last.reason, last.detail + " after " + std::to_string(config_.retry.max_retries) + " retries"};
}

}  // namespace genmine
