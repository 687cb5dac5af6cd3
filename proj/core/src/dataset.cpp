#include "normnet/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "normnet/errors.hpp"
#include "normnet/parallel.hpp"
#include "normnet/pearson.hpp"

namespace normnet {

namespace {

using nlohmann::json;

void shuffle_in_place(std::vector<std::size_t>& v, RandomStream rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

void LabeledDataset::recount() {
  meta.counts.clear();
  for (const auto& r : records) {
    ++meta.counts[{r.label, static_cast<int>(r.values.size())}];
  }
}

std::vector<std::pair<double, double>> feasible_grid_pairs(const GenSpec& spec) {
  std::vector<std::pair<double, double>> pairs;
  const auto skew_steps = static_cast<long>(std::lround(2.0 * spec.skew_abs_max / spec.skew_step));
  const auto kurt_steps = static_cast<long>(std::lround(spec.kurt_max / spec.kurt_step));
  for (long i = 0; i <= skew_steps; ++i) {
    const double skew = -spec.skew_abs_max + static_cast<double>(i) * spec.skew_step;
    for (long j = 0; j <= kurt_steps; ++j) {
      const double kurt = static_cast<double>(j) * spec.kurt_step;
      if (!pearson_feasible(skew, kurt)) continue;
      if (skew == 0.0 && kurt == 3.0) continue;  // the normal point
      try {
        (void)pearson_from_moments(0.0, 1.0, skew, kurt);
      } catch (const Error&) {
        continue;  // degenerate coefficient denominator on this grid point
      }
      pairs.emplace_back(skew, kurt);
    }
  }
  return pairs;
}

LabeledDataset generate_pearson_style_set(const GenSpec& spec) {
  if (spec.sizes.empty() || spec.per_class_total < 1) {
    throw InvalidParameterError("generate: sizes and per_class_total must be set");
  }
  std::vector<std::pair<double, double>> pairs = feasible_grid_pairs(spec);
  if (pairs.empty()) {
    throw InfeasibleSpecError("generate: no feasible grid pairs");
  }

  RandomStream master(spec.master_seed);
  {
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle_in_place(order, master.substream(0));
    std::vector<std::pair<double, double>> shuffled(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) shuffled[i] = pairs[order[i]];
    pairs = std::move(shuffled);
  }

  // Per-(class,size) quotas; the remainder goes to the first sizes.
  const auto n_sizes = spec.sizes.size();
  const int base = spec.per_class_total / static_cast<int>(n_sizes);
  const int rem = spec.per_class_total % static_cast<int>(n_sizes);
  std::vector<int> quota(n_sizes, base);
  for (int i = 0; i < rem; ++i) ++quota[static_cast<std::size_t>(i)];

  struct Plan {
    int n;
    int label;
    std::size_t pair_index;  // only for label 0
  };
  std::vector<Plan> plan;
  plan.reserve(2 * static_cast<std::size_t>(spec.per_class_total));
  std::size_t nn_counter = 0;
  for (std::size_t s = 0; s < n_sizes; ++s) {
    for (int k = 0; k < quota[s]; ++k) {
      plan.push_back({spec.sizes[s], 1, 0});
    }
    for (int k = 0; k < quota[s]; ++k) {
      plan.push_back({spec.sizes[s], 0, nn_counter % pairs.size()});
      ++nn_counter;
    }
  }

  // Shape samplers for the distinct grid pairs actually visited.
  const std::size_t used = std::min(nn_counter, pairs.size());
  std::vector<std::unique_ptr<PearsonSampler>> samplers(used);
  parallel_for(used, [&](std::size_t i) {
    samplers[i] = std::make_unique<PearsonSampler>(
        pearson_from_moments(0.0, 1.0, pairs[i].first, pairs[i].second));
  });

  LabeledDataset out;
  out.meta.name = spec.name;
  out.meta.master_seed = spec.master_seed;
  out.records.resize(plan.size());
  parallel_for(plan.size(), [&](std::size_t rid) {
    const Plan& p = plan[rid];
    RandomStream rng = master.substream(1 + rid);
    const double mu = rng.uniform(spec.mean_lo, spec.mean_hi);
    const double sigma = rng.uniform(spec.sd_lo, spec.sd_hi);
    Record rec;
    rec.label = p.label;
    rec.prov.seed_index = rid;
    rec.values.resize(static_cast<std::size_t>(p.n));
    if (p.label == 1) {
      for (auto& v : rec.values) v = rng.normal(mu, sigma);
      rec.prov.family = "normal";
      rec.prov.params = {mu, sigma};
    } else {
      // Grid pairs near the feasibility boundary behave almost like two-point
      // laws; small samples can come out constant, which no downstream
      // consumer accepts (sd must be positive). Redraw until non-degenerate.
      const auto& sampler = *samplers[p.pair_index];
      for (int attempt = 0; attempt < 1000; ++attempt) {
        for (auto& v : rec.values) v = mu + sigma * sampler.draw(rng);
        if (sample_min(rec.values) < sample_max(rec.values)) break;
      }
      rec.prov.family = "pearson";
      rec.prov.params = {mu, sigma};
      rec.prov.moments = {
          {mu, sigma, pairs[p.pair_index].first, pairs[p.pair_index].second}};
    }
    out.records[rid] = std::move(rec);
  });
  out.recount();
  return out;
}

LabeledDataset generate_group_set(Group g, const std::vector<int>& sizes,
                                  int per_size, std::uint64_t seed) {
  if (per_size < 1) throw InvalidParameterError("generate_group_set: per_size >= 1");
  const std::vector<DistributionSpec> dists = group_distributions(g);
  RandomStream master(seed);
  LabeledDataset out;
  out.meta.name = group_name(g);
  out.meta.master_seed = seed;
  out.records.resize(sizes.size() * static_cast<std::size_t>(per_size));
  parallel_for(out.records.size(), [&](std::size_t rid) {
    const std::size_t size_idx = rid / static_cast<std::size_t>(per_size);
    const std::size_t k = rid % static_cast<std::size_t>(per_size);
    const DistributionSpec& spec = dists[k % dists.size()];
    RandomStream rng = master.substream(1 + rid);
    Record rec;
    rec.label = 0;
    rec.values = sample(spec, sizes[size_idx], rng);
    rec.prov.family = family_name(spec);
    rec.prov.params = family_params(spec);
    rec.prov.seed_index = rid;
    out.records[rid] = std::move(rec);
  });
  out.recount();
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split_cv_test(const LabeledDataset& data,
                                                        double cv_fraction,
                                                        RandomStream& rng) {
  if (!(cv_fraction > 0.0 && cv_fraction < 1.0)) {
    throw InvalidProbabilityError("split_cv_test: cv_fraction must lie in (0,1)");
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto& r = data.records[i];
    strata[{r.label, static_cast<int>(r.values.size())}].push_back(i);
  }
  std::vector<bool> in_cv(data.records.size(), false);
  std::size_t stratum_index = 0;
  for (auto& [key, idx] : strata) {
    shuffle_in_place(idx, rng.substream(stratum_index++));
    const auto take = static_cast<std::size_t>(
        std::lround(cv_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < take && k < idx.size(); ++k) in_cv[idx[k]] = true;
  }
  LabeledDataset cv, test;
  cv.meta = data.meta;
  test.meta = data.meta;
  cv.meta.name = data.meta.name + "_cv";
  test.meta.name = data.meta.name + "_test";
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    (in_cv[i] ? cv : test).records.push_back(data.records[i]);
  }
  cv.recount();
  test.recount();
  return {std::move(cv), std::move(test)};
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, delim)) {
    // trim
    auto b = field.find_first_not_of(" \t\r\"");
    auto e = field.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? std::string()
                                         : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

char detect_delim(const std::string& header) {
  if (header.find(';') != std::string::npos &&
      header.find(',') == std::string::npos) {
    return ';';
  }
  return ',';
}

double parse_number(const std::string& field, std::size_t row, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw MalformedCsvError(std::string("row ") + std::to_string(row) +
                            ": cannot parse " + what + " value '" + field + "'");
  }
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::vector<Sample> ingest_height_csv(const std::filesystem::path& path,
                                      int window_years, int min_age) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw MalformedCsvError("empty file");
  const char delim = detect_delim(line);
  const std::vector<std::string> header = split_fields(line, delim);
  int col_height = -1, col_age = -1, col_male = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = lower(header[i]);
    if (h == "height") col_height = static_cast<int>(i);
    if (h == "age") col_age = static_cast<int>(i);
    if (h == "male") col_male = static_cast<int>(i);
  }
  if (col_height < 0) throw MissingColumnError("height column missing");
  if (col_age < 0) throw MissingColumnError("age column missing");
  if (col_male < 0) throw MissingColumnError("male column missing");

  struct Row {
    double height, age;
    int male;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line, delim);
    const auto need = static_cast<std::size_t>(std::max({col_height, col_age, col_male})) + 1;
    if (fields.size() < need) {
      throw MalformedCsvError("row " + std::to_string(line_no) + ": too few fields");
    }
    Row r;
    r.height = parse_number(fields[static_cast<std::size_t>(col_height)], line_no, "height");
    r.age = parse_number(fields[static_cast<std::size_t>(col_age)], line_no, "age");
    r.male = parse_number(fields[static_cast<std::size_t>(col_male)], line_no, "male") != 0.0;
    rows.push_back(r);
  }

  // Windows [s, s + window_years - 1) sliding by one year, s = min_age..80,
  // each sex separately; only windows with >= 3 members yield a sample.
  const double width = static_cast<double>(window_years - 1);
  std::vector<Sample> samples;
  for (int sex = 0; sex <= 1; ++sex) {
    for (int start = min_age; start <= 80; ++start) {
      Sample s;
      for (const Row& r : rows) {
        if (r.male == sex && r.age >= start && r.age < static_cast<double>(start) + width) {
          s.push_back(r.height);
        }
      }
      if (s.size() >= 3) samples.push_back(std::move(s));
    }
  }
  return samples;
}

LabeledDataset ingest_magnitude_csv(const std::filesystem::path& path,
                                    const std::vector<int>& sizes, int per_size,
                                    RandomStream& rng) {
  if (per_size < 1) throw InvalidParameterError("ingest_magnitude_csv: per_size >= 1");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw MalformedCsvError("empty file");
  const char delim = detect_delim(line);
  std::vector<double> catalog;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line, delim);
    if (fields.empty() || fields[0].empty()) {
      throw MalformedCsvError("row " + std::to_string(line_no) + ": empty magnitude");
    }
    catalog.push_back(parse_number(fields[0], line_no, "magnitude"));
  }
  const int max_n = *std::max_element(sizes.begin(), sizes.end());
  if (catalog.size() < static_cast<std::size_t>(max_n)) {
    throw CatalogTooSmallError("catalog has " + std::to_string(catalog.size()) +
                               " rows, need at least " + std::to_string(max_n));
  }

  LabeledDataset out;
  out.meta.name = "magnitude";
  out.meta.master_seed = rng.key();
  out.records.resize(sizes.size() * static_cast<std::size_t>(per_size));
  parallel_for(out.records.size(), [&](std::size_t rid) {
    const std::size_t size_idx = rid / static_cast<std::size_t>(per_size);
    const auto n = static_cast<std::size_t>(sizes[size_idx]);
    RandomStream r = rng.substream(1 + rid);
    // Floyd's algorithm: n distinct catalog indices.
    std::unordered_set<std::size_t> chosen;
    std::vector<std::size_t> picks;
    picks.reserve(n);
    for (std::size_t j = catalog.size() - n; j < catalog.size(); ++j) {
      const std::size_t t = static_cast<std::size_t>(r.next_u64() % (j + 1));
      if (chosen.insert(t).second) {
        picks.push_back(t);
      } else {
        chosen.insert(j);
        picks.push_back(j);
      }
    }
    Record rec;
    rec.label = 0;
    rec.prov.family = "magnitude_catalog";
    rec.prov.seed_index = rid;
    rec.values.reserve(n);
    for (std::size_t idx : picks) rec.values.push_back(catalog[idx]);
    out.records[rid] = std::move(rec);
  });
  out.recount();
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

constexpr int kFormatVersion = 1;

std::string serialize(const LabeledDataset& data) {
  std::string out;
  {
    json meta;
    meta["format_version"] = kFormatVersion;
    meta["name"] = data.meta.name;
    meta["master_seed"] = data.meta.master_seed;
    json counts = json::array();
    for (const auto& [key, count] : data.meta.counts) {
      counts.push_back({key.first, key.second, count});
    }
    meta["counts"] = counts;
    out += meta.dump();
    out += '\n';
  }
  for (const auto& r : data.records) {
    json j;
    j["values"] = r.values;
    j["label"] = r.label;
    json prov;
    prov["family"] = r.prov.family;
    prov["params"] = r.prov.params;
    if (r.prov.moments) prov["moments"] = *r.prov.moments;
    prov["seed_index"] = r.prov.seed_index;
    j["prov"] = prov;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace

void save_dataset(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const std::string text = serialize(data);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dataset file " + path.string());
  LabeledDataset data;
  try {
    const json meta = json::parse(line);
    const int version = meta.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw FormatVersionMismatchError("dataset format_version " +
                                       std::to_string(version) + ", expected " +
                                       std::to_string(kFormatVersion));
    }
    data.meta.name = meta.at("name").get<std::string>();
    data.meta.master_seed = meta.at("master_seed").get<std::uint64_t>();
    for (const auto& c : meta.at("counts")) {
      data.meta.counts[{c.at(0).get<int>(), c.at(1).get<int>()}] = c.at(2).get<int>();
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      Record r;
      r.values = j.at("values").get<std::vector<double>>();
      r.label = j.at("label").get<int>();
      const json& prov = j.at("prov");
      r.prov.family = prov.at("family").get<std::string>();
      r.prov.params = prov.at("params").get<std::vector<double>>();
      if (prov.contains("moments")) {
        const auto m = prov.at("moments").get<std::vector<double>>();
        if (m.size() != 4) throw IoError("prov.moments must have 4 entries");
        r.prov.moments = {{m[0], m[1], m[2], m[3]}};
      }
      r.prov.seed_index = prov.at("seed_index").get<std::uint64_t>();
      data.records.push_back(std::move(r));
    }
    LabeledDataset verify = data;
    verify.recount();
    if (verify.meta.counts != data.meta.counts) {
      throw IoError("dataset counts metadata disagrees with records in " +
                    path.string());
    }
  } catch (const FormatVersionMismatchError&) {
    throw;
  } catch (const json::exception& e) {
    throw IoError("malformed dataset file " + path.string() + ": " + e.what());
  }
  return data;
}

std::uint64_t dataset_hash(const LabeledDataset& data) {
  const std::string text = serialize(data);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace normnet
