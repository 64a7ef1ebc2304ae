/**
 * @file fetch.hpp
 * Downloads raw dataset files listed in a plain-text manifest (one URL per
 * line, '#' comments). Each entry succeeds or fails on its own.
 *
 * http:// always works; https:// needs the build to define
 * CPPHTTPLIB_OPENSSL_SUPPORT. file:// URLs are copied locally.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <regex>
#include <string>
#include <system_error>
#include <vector>

#include <httplib.h>

#include "errors.hpp"

namespace pafc {

struct FetchResult {
  std::string url;
  std::filesystem::path destination;
  bool ok = false;
  std::string message;
};

inline std::vector<std::string> read_manifest(std::istream& in) {
  std::vector<std::string> urls;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    urls.push_back(line.substr(b, e - b + 1));
  }
  return urls;
}

namespace detail {

inline std::string url_file_name(const std::string& url, std::size_t index) {
  auto path = url;
  if (const auto q = path.find_first_of("?#"); q != std::string::npos) path.resize(q);
  const auto slash = path.find_last_of('/');
  auto name = slash == std::string::npos ? path : path.substr(slash + 1);
  if (name.empty() || name.find(':') != std::string::npos) name = "download-" + std::to_string(index);
  return name;
}

inline FetchResult fetch_one(const std::string& url, const std::filesystem::path& dest_dir, std::size_t index) {
  FetchResult r{url, dest_dir / url_file_name(url, index), false, {}};
  static const std::regex url_re(R"(^(https?)://([^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (url.rfind("file://", 0) == 0) {
    std::error_code ec;
    std::filesystem::copy_file(url.substr(7), r.destination, std::filesystem::copy_options::overwrite_existing, ec);
    if (ec) {
      r.message = ec.message();
    } else {
      r.ok = true;
    }
    return r;
  }
  if (!std::regex_match(url, m, url_re)) {
    r.message = "unsupported URL";
    return r;
  }
  httplib::Client client(m[1].str() + "://" + m[2].str());
  if (!client.is_valid()) {
    r.message = "client unavailable for scheme " + m[1].str();
    return r;
  }
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  const auto res = client.Get(m[3].matched ? m[3].str() : "/");
  if (!res) {
    r.message = "request failed: " + httplib::to_string(res.error());
    return r;
  }
  if (res->status != 200) {
    r.message = "HTTP " + std::to_string(res->status);
    return r;
  }
  std::ofstream out(r.destination, std::ios::binary);
  out << res->body;
  out.flush();
  if (!out) {
    r.message = "cannot write " + r.destination.string();
    return r;
  }
  r.ok = true;
  return r;
}

}  // namespace detail

inline std::vector<FetchResult> fetch_manifest(const std::vector<std::string>& urls,
                                               const std::filesystem::path& dest_dir) {
  std::error_code ec;
  std::filesystem::create_directories(dest_dir, ec);
  if (ec) throw IoError("cannot create '" + dest_dir.string() + "': " + ec.message());
  std::vector<FetchResult> results;
  for (std::size_t i = 0; i < urls.size(); ++i) {
    try {
      results.push_back(detail::fetch_one(urls[i], dest_dir, i));
    } catch (const std::exception& e) {
      results.push_back({urls[i], {}, false, e.what()});
    }
  }
  return results;
}

}  // namespace pafc
