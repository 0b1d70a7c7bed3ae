#include "cbnn/mask.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cbnn {

std::string to_string(PruneMethod m) {
  switch (m) {
    case PruneMethod::kStn: return "stn";
    case PruneMethod::kSpn: return "spn";
    case PruneMethod::kRnd: return "rnd";
  }
  throw std::logic_error("to_string: bad PruneMethod");
}

PruneMethod prune_method_from_string(const std::string& s) {
  if (s == "stn" || s == "STN") return PruneMethod::kStn;
  if (s == "spn" || s == "SPN") return PruneMethod::kSpn;
  if (s == "rnd" || s == "RND") return PruneMethod::kRnd;
  throw std::invalid_argument("unknown pruning method: " + s);
}

int PruneMask::pruned_count() const {
  int n = 0;
  for (auto k : keep) n += (k == 0);
  return n;
}

PruneMask PruneMask::keep_all(int t, PruneMethod method) {
  PruneMask m;
  m.keep.assign(static_cast<std::size_t>(t), 1);
  m.method = method;
  m.level = 0.0;
  return m;
}

void apply_mask(const PruneMask& mask, Eigen::VectorXd& state) {
  if (state.size() < mask.size())
    throw std::invalid_argument("apply_mask: state shorter than mask");
  // at most one trailing coordinate (log tau^2) may extend past the mask
  if (state.size() > mask.size() + 1)
    throw std::invalid_argument("apply_mask: state/mask length mismatch");
  for (int i = 0; i < mask.size(); ++i)
    if (!mask.keep[static_cast<std::size_t>(i)]) state(i) = 0.0;
}

Eigen::VectorXd apply_mask_copy(const PruneMask& mask,
                                const Eigen::VectorXd& state) {
  Eigen::VectorXd out = state;
  apply_mask(mask, out);
  return out;
}

void write_mask(const PruneMask& mask, std::ostream& os) {
  os << "method," << to_string(mask.method) << "\n";
  os << "level," << mask.level << "\n";
  if (mask.seed) os << "seed," << *mask.seed << "\n";
  os << "index,keep\n";
  for (int i = 0; i < mask.size(); ++i)
    os << i << "," << int(mask.keep[static_cast<std::size_t>(i)]) << "\n";
}

PruneMask read_mask(std::istream& is) {
  PruneMask mask;
  std::string line;
  bool in_body = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("mask file: malformed line: " + line);
    std::string key = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    if (!in_body) {
      if (key == "method") { mask.method = prune_method_from_string(value); continue; }
      if (key == "level") { mask.level = std::stod(value); continue; }
      if (key == "seed") { mask.seed = std::stoull(value); continue; }
      if (key == "index") { in_body = true; continue; }  // header row
      throw std::runtime_error("mask file: unexpected key: " + key);
    }
    int idx = std::stoi(key);
    if (idx != static_cast<int>(mask.keep.size()))
      throw std::runtime_error("mask file: indices out of order");
    mask.keep.push_back(static_cast<std::uint8_t>(std::stoi(value) != 0));
  }
  if (!in_body) throw std::runtime_error("mask file: missing index,keep body");
  return mask;
}

void save_mask(const PruneMask& mask, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write mask file: " + path);
  write_mask(mask, f);
}

PruneMask load_mask(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read mask file: " + path);
  return read_mask(f);
}

}  // namespace cbnn
