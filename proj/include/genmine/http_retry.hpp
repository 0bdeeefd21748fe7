#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <string>

#include <json.hpp>

#include "genmine/result.hpp"

namespace genmine {

struct RetryPolicy {
  int max_retries = 3;  // attempts = max_retries + 1
  std::chrono::milliseconds initial_backoff{100};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{5000};

  // Delay before retry number `retry` (1-based).
  std::chrono::milliseconds backoff(int retry) const;
};

struct HttpClientConfig {
  std::string base_url;  // "http://host:port"
  RetryPolicy retry;
  std::chrono::milliseconds connect_timeout{2000};
  std::chrono::milliseconds read_timeout{30000};
  std::size_t max_in_flight = 4;
};

// Counting semaphore with a runtime limit.
class Semaphore {
 public:
  explicit Semaphore(std::size_t permits) : permits_(permits == 0 ? 1 : permits) {}
  void acquire();
  void release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t permits_;
};

// POSTs JSON bodies, retrying transport failures and non-200 responses with
// exponential backoff. A 200 response whose body is not JSON is not retried.
// Safe to call from many threads; concurrency is capped by max_in_flight.
class JsonPostClient {
 public:
  explicit JsonPostClient(HttpClientConfig config);

  Result<nlohmann::json> post(const std::string& path, const nlohmann::json& body);

  // Number of HTTP requests attempted, including retries.
  std::size_t requests() const { return requests_.load(); }
  const HttpClientConfig& config() const { return config_; }

 private:
  HttpClientConfig config_;
  Semaphore in_flight_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace genmine
