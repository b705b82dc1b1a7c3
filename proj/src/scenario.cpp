#include "rofsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rofsim {

void validate(const Scenario& s) {
  if (s.rrh_xy.empty() || s.ue_xy.empty()) throw ConfigError("need at least one RRH and one UE");
  if (s.ue_power_dbm.size() != s.ue_xy.size()) {
    throw ConfigError("ue power list must match UE count");
  }
  if (s.cable && (s.rrh_xy.size() != 1 || s.ue_xy.size() != 1)) {
    throw ConfigError("cable mode is single RRH, single UE");
  }
  if (s.cable && s.direction == Direction::downlink) {
    throw ConfigError("cable mode is an uplink measurement hookup");
  }
  if (s.scale <= 0.0) throw ConfigError("scale must be positive");
  if (s.n_fft < 8 || (s.n_fft & (s.n_fft - 1)) != 0) {
    throw ConfigError("n_fft must be a power of two >= 8");
  }
  if (s.bandwidth_hz < 2.0 * s.subcarrier_hz) throw ConfigError("bandwidth below two subcarriers");
  if (s.bandwidth_hz > s.n_fft * s.subcarrier_hz * 0.9) {
    throw ConfigError("bandwidth too close to the FFT rate");
  }
  if (s.carrier_hz + s.n_fft * s.subcarrier_hz / 2.0 > s.fronthaul_hz / 2.0) {
    throw ConfigError("carrier band does not fit below the fronthaul Nyquist rate");
  }
  if (s.dither_hz <= 0.0 || s.dither_hz >= s.carrier_hz - s.bandwidth_hz / 2.0) {
    throw ConfigError("dither tone must sit below the signal band");
  }
  if (!s.cable) {
    for (const auto& r : s.rrh_xy) {
      for (const auto& u : s.ue_xy) {
        const double d = std::hypot(r[0] - u[0], r[1] - u[1]);
        if (d < 0.5) throw ConfigError("an RRH-UE distance is below the 0.5 m model floor");
      }
    }
  }
}

Scenario preset_fig8() {
  Scenario s;
  s.rrh_xy = {{0.0, 0.0}};
  s.ue_xy = {{1.0, 0.0}};
  s.ue_power_dbm = {-40.0};
  s.cable = true;
  s.combiner = Combiner::mrc;
  s.scale = 10.0;  // cable sweeps run at reduced rate; ratios are preserved
  return s;
}

Scenario preset_fig9() {
  Scenario s;
  s.rrh_xy = {{0.5, 0.7}, {1.6, 0.5}, {1.05, 1.7}};
  s.ue_xy = {{1.05, 0.95}, {3.1, 3.6}};
  s.ue_power_dbm = {-5.0, -5.0};
  s.combiner = Combiner::zf;
  return s;
}

Scenario preset_fig10() {
  Scenario s;
  s.rrh_xy = {{0.5, 0.2},  {1.75, 0.2}, {3.0, 0.2}, {0.5, 3.8}, {1.75, 3.8}, {3.0, 3.8},
              {0.2, 1.0},  {0.2, 2.0},  {0.2, 3.0}, {3.3, 1.0}, {3.3, 2.0},  {3.3, 3.0}};
  s.ue_xy = {{1.0, 1.2}, {2.5, 1.2}, {1.0, 2.8}, {2.5, 2.8}, {1.75, 2.0}};
  s.ue_power_dbm = {10.0, 10.0, 10.0, 10.0, 10.0};
  s.combiner = Combiner::zf;
  return s;
}

std::vector<Scenario> preset_su_coverage(bool colocated) {
  Scenario base;
  if (colocated) {
    base.rrh_xy = {{2.3, 3.7}, {2.5, 3.7}, {2.7, 3.7}, {2.9, 3.7}, {3.1, 3.7}, {3.3, 3.7}};
  } else {
    base.rrh_xy = {{0.4, 0.5}, {1.75, 0.3}, {3.1, 0.5}, {0.4, 3.5}, {1.75, 3.7}, {3.1, 3.5}};
  }
  base.combiner = Combiner::mrc;
  const std::vector<std::array<double, 2>> spots = {
      {0.5, 1.0}, {1.75, 1.0}, {3.0, 1.0}, {0.5, 2.0}, {1.75, 2.0}, {3.0, 2.0},
      {0.5, 3.0}, {1.75, 3.0}, {3.0, 3.0}, {1.2, 0.9},  {2.4, 3.1}};
  std::vector<Scenario> out;
  for (const auto& p : spots) {
    Scenario s = base;
    s.ue_xy = {p};
    s.ue_power_dbm = {0.0};
    out.push_back(s);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::istringstream is(v);
  double x;
  while (is >> x) out.push_back(x);
  if (!is.eof()) throw ConfigError("malformed number list for " + key);
  return out;
}

std::vector<std::array<double, 2>> parse_points(const std::string& v, const std::string& key) {
  std::vector<std::array<double, 2>> out;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto nums = parse_numbers(part, key);
    if (nums.size() != 2) throw ConfigError(key + " entries must be x y pairs");
    out.push_back({nums[0], nums[1]});
  }
  return out;
}

double parse_one(const std::string& v, const std::string& key) {
  const auto nums = parse_numbers(v, key);
  if (nums.size() != 1) throw ConfigError(key + " expects a single value");
  return nums[0];
}

}  // namespace

Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);

  Scenario s;
  s.ue_power_dbm.clear();
  bool have_ue_power = false;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section at line " +
                                                std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key=value at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "geometry.rrh") {
      s.rrh_xy = parse_points(val, qual);
    } else if (qual == "geometry.ue") {
      s.ue_xy = parse_points(val, qual);
    } else if (qual == "radio.carrier_hz") {
      s.carrier_hz = parse_one(val, qual);
    } else if (qual == "radio.fronthaul_hz") {
      s.fronthaul_hz = parse_one(val, qual);
    } else if (qual == "radio.bandwidth_hz") {
      s.bandwidth_hz = parse_one(val, qual);
    } else if (qual == "radio.subcarrier_hz") {
      s.subcarrier_hz = parse_one(val, qual);
    } else if (qual == "radio.n_fft") {
      s.n_fft = static_cast<int>(parse_one(val, qual));
    } else if (qual == "radio.cp_fraction") {
      s.cp_fraction = parse_one(val, qual);
    } else if (qual == "radio.dither_hz") {
      s.dither_hz = parse_one(val, qual);
    } else if (qual == "radio.dither_dbm") {
      s.dither_dbm = parse_one(val, qual);
    } else if (qual == "radio.scale") {
      s.scale = parse_one(val, qual);
    } else if (qual == "power.ue_dbm") {
      s.ue_power_dbm = parse_numbers(val, qual);
      have_ue_power = true;
    } else if (qual == "power.rrh_dbm") {
      s.rrh_power_dbm = parse_one(val, qual);
    } else if (qual == "mode.quantizer") {
      if (val == "one_bit") s.mode = QuantMode::one_bit;
      else if (val == "inf_bit") s.mode = QuantMode::inf_bit;
      else throw ConfigError("quantizer must be one_bit or inf_bit");
    } else if (qual == "mode.direction") {
      if (val == "uplink") s.direction = Direction::uplink;
      else if (val == "downlink") s.direction = Direction::downlink;
      else throw ConfigError("direction must be uplink or downlink");
    } else if (qual == "mode.combiner") {
      if (val == "mrc") s.combiner = Combiner::mrc;
      else if (val == "zf") s.combiner = Combiner::zf;
      else throw ConfigError("combiner must be mrc or zf");
    } else if (qual == "mode.precoder") {
      if (val == "mrt") s.precoder = Precoder::mrt;
      else if (val == "zf") s.precoder = Precoder::zf;
      else throw ConfigError("precoder must be mrt or zf");
    } else if (qual == "mode.cable") {
      if (val == "true" || val == "1") s.cable = true;
      else if (val == "false" || val == "0") s.cable = false;
      else throw ConfigError("cable must be true or false");
    } else if (qual == "seed.master") {
      s.seed = static_cast<uint64_t>(parse_one(val, qual));
    } else {
      throw ConfigError("unknown key '" + qual + "' at line " + std::to_string(line_no));
    }
  }

  if (!have_ue_power) s.ue_power_dbm.assign(s.ue_xy.size(), 0.0);
  validate(s);
  return s;
}

}  // namespace rofsim
