#include "spinboard/runner/records.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinboard::runner {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  struct V {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match table " + name);
  rows.push_back(std::move(row));
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(format_cell(r[i]));
    out += "\r\n";
  }
  return out;
}

namespace {
std::string digest_hex(const EVP_MD* md, const std::string& data) {
  unsigned char buf[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), buf, &len, md, nullptr) != 1) throw std::runtime_error("digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[buf[i] >> 4];
    out += hex[buf[i] & 15];
  }
  return out;
}
}  // namespace

std::string sha256_hex(const std::string& data) { return digest_hex(EVP_sha256(), data); }

std::string git_blob_id(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  return digest_hex(EVP_sha1(), blob + content);
}

std::string reference_doc_id() {
#ifdef SPINBOARD_REFERENCE_DOC
  std::ifstream in(SPINBOARD_REFERENCE_DOC, std::ios::binary);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return git_blob_id(ss.str());
  }
#endif
  return "unavailable";
}

Ledger::Ledger(std::string path, std::string config_sha256, std::string reference_id, std::uint64_t seed)
    : path_(std::move(path)), config_hash_(std::move(config_sha256)), reference_id_(std::move(reference_id)), seed_(seed) {}

std::string Ledger::to_json_line(const CheckRecord& r, const std::string& config_sha256,
                                 const std::string& reference_id, std::uint64_t seed) {
  // ordered_json keeps insertion order, so identical runs give identical bytes
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["check"] = r.check;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.inputs) {
    if (const auto* s = std::get_if<std::string>(&v)) in[k] = *s;
    else if (const auto* d = std::get_if<double>(&v)) in[k] = format_double(*d);
    else if (const auto* i = std::get_if<long long>(&v)) in[k] = *i;
    else in[k] = std::get<bool>(v);
  }
  j["inputs"] = in;
  // numbers as 17-digit strings: JSON has no inf/nan
  j["value"] = format_double(r.value);
  j["slack"] = format_double(r.slack);
  j["sigma"] = format_double(r.sigma);
  j["pass"] = r.pass;
  j["hard"] = r.hard;
  j["seed"] = seed;
  j["config_sha256"] = config_sha256;
  j["reference_id"] = reference_id;
  return j.dump();
}

void Ledger::append(const CheckRecord& r) {
  const std::string line = to_json_line(r, config_hash_, reference_id_, seed_);
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ledger " + path_);
  out << line << '\n';
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace spinboard::runner
