#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace heval::service {

/// JSON/HTTP front end over a directory of campaigns.
///
/// `root` may itself be a campaign directory, hold campaign directories as
/// children, or both. New campaigns are created as children of `root`.
/// All endpoints live under /v1:
///
///   POST /v1/campaigns
///   POST /v1/campaigns/{id}/judges
///   GET  /v1/campaigns/{id}/assignments/next?judge=J
///   POST /v1/campaigns/{id}/annotations
///   GET  /v1/campaigns/{id}/reports/{kind}?judge=&subset=
///   GET  /v1/campaigns/{id}/export/{annotations|scores}
///
/// Judge-facing bodies (assignments, annotation receipts) never carry an
/// engine id or name.
class Server {
 public:
  explicit Server(std::filesystem::path root);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  /// Ids of the loaded campaigns.
  std::vector<std::string> campaign_ids() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace heval::service
