#include "mealcast/model_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "mealcast/error.hpp"
#include "text_util.hpp"

namespace mealcast {

namespace {

constexpr std::string_view kMagic = "mealcast-model";
constexpr int kVersion = 1;

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      const auto t = detail::trim(line);
      if (!t.empty() && t.front() != '#') return std::string(t);
    }
    throw fail(std::string("unexpected end of file, expecting ") + expecting);
  }

  Error fail(const std::string& msg) const {
    return validation_error("model file line " + std::to_string(lineno_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

std::vector<std::string> expect_keyword(LineReader& rd, const std::string& line, std::string_view keyword,
                                        std::size_t min_fields) {
  std::vector<std::string> fields;
  for (auto f : detail::split_ws(line)) fields.emplace_back(f);
  if (fields.empty() || fields.front() != keyword) throw rd.fail("expected '" + std::string(keyword) + "'");
  if (fields.size() < min_fields) throw rd.fail("'" + std::string(keyword) + "' line is incomplete");
  return fields;
}

double parse_real(LineReader& rd, std::string_view s) {
  const auto v = detail::parse_double(s);
  if (!v) throw rd.fail("'" + std::string(s) + "' is not a number");
  return *v;
}

Eigen::Index parse_dim(LineReader& rd, std::string_view s) {
  const auto v = detail::parse_int(s);
  if (!v || *v < 1) throw rd.fail("'" + std::string(s) + "' is not a positive dimension");
  return static_cast<Eigen::Index>(*v);
}

std::vector<double> parse_reals(LineReader& rd, const std::string& line, Eigen::Index expected) {
  std::vector<double> out;
  for (auto f : detail::split_ws(line)) out.push_back(parse_real(rd, f));
  if (static_cast<Eigen::Index>(out.size()) != expected)
    throw rd.fail("expected " + std::to_string(expected) + " values, found " + std::to_string(out.size()));
  return out;
}

}  // namespace

void write_model(std::ostream& out, const MlpModel& m) {
  m.validate();
  out << kMagic << ' ' << kVersion << '\n';
  out << "topology " << m.topology().to_string() << '\n';
  out << "activations";
  for (auto a : m.activations()) out << ' ' << to_string(a);
  out << '\n';
  out << "target_bounds " << detail::format_exact(m.target_bounds().v_min) << ' '
      << detail::format_exact(m.target_bounds().v_max) << '\n';
  const auto& layers = m.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    out << "layer " << i << ' ' << l.outputs() << ' ' << l.inputs() << '\n';
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) out << (c ? " " : "") << detail::format_exact(l.weights(r, c));
      out << '\n';
    }
    for (Eigen::Index r = 0; r < l.biases.size(); ++r) out << (r ? " " : "") << detail::format_exact(l.biases(r));
    out << '\n';
  }
  out << "codebooks " << m.codebooks().size() << '\n';
  write_codebooks(out, m.codebooks());
  out << "end\n";
}

MlpModel read_model(std::istream& in) {
  LineReader rd(in);

  auto header = expect_keyword(rd, rd.next("header"), kMagic, 2);
  if (detail::parse_int(header[1]) != kVersion) throw rd.fail("unsupported model version '" + std::string(header[1]) + "'");

  const auto topo_fields = expect_keyword(rd, rd.next("topology"), "topology", 2);
  Topology topology;
  try {
    topology = Topology::parse(topo_fields[1]);
  } catch (const Error& e) {
    throw rd.fail(e.what());
  }

  const auto act_line = rd.next("activations");
  const auto act_fields = expect_keyword(rd, act_line, "activations", 2);
  std::vector<ActivationKind> acts;
  for (std::size_t i = 1; i < act_fields.size(); ++i) {
    try {
      acts.push_back(parse_activation(act_fields[i]));
    } catch (const Error& e) {
      throw rd.fail(e.what());
    }
  }

  const auto bounds_fields = expect_keyword(rd, rd.next("target_bounds"), "target_bounds", 3);
  const NormBounds bounds{parse_real(rd, bounds_fields[1]), parse_real(rd, bounds_fields[2])};
  if (!(bounds.v_max > bounds.v_min)) throw rd.fail("target bounds are degenerate");

  std::vector<Layer> layers;
  std::string line = rd.next("layer or codebooks");
  while (line.starts_with("layer")) {
    const auto f = expect_keyword(rd, line, "layer", 4);
    if (detail::parse_int(f[1]) != static_cast<std::int64_t>(layers.size())) throw rd.fail("layers out of order");
    const Eigen::Index rows = parse_dim(rd, f[2]), cols = parse_dim(rd, f[3]);
    Layer l;
    l.weights.resize(rows, cols);
    l.biases.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto vals = parse_reals(rd, rd.next("weight row"), cols);
      for (Eigen::Index c = 0; c < cols; ++c) l.weights(r, c) = vals[static_cast<std::size_t>(c)];
    }
    const auto b = parse_reals(rd, rd.next("biases"), rows);
    for (Eigen::Index r = 0; r < rows; ++r) l.biases(r) = b[static_cast<std::size_t>(r)];
    layers.push_back(std::move(l));
    line = rd.next("layer or codebooks");
  }

  if (layers.size() != acts.size())
    throw rd.fail(std::to_string(layers.size()) + " layers but " + std::to_string(acts.size()) + " activations");
  for (std::size_t i = 0; i < layers.size(); ++i) layers[i].activation = acts[i];

  const auto cb_fields = expect_keyword(rd, line, "codebooks", 2);
  const auto nbooks = detail::parse_int(cb_fields[1]);
  if (!nbooks || *nbooks < 0) throw rd.fail("invalid codebook count");
  std::ostringstream book_text;
  for (std::int64_t i = 0; i < *nbooks; ++i) book_text << rd.next("codebook") << '\n';
  Codebooks books;
  try {
    std::istringstream bin(book_text.str());
    books = read_codebooks(bin);
    if (!books.empty()) check_codebook_schema(books);
  } catch (const Error& e) {
    throw rd.fail(e.what());
  }
  if (rd.next("end") != "end") throw rd.fail("expected 'end'");

  MlpModel m;
  try {
    m = MlpModel(std::move(layers), bounds, std::move(books));
  } catch (const Error& e) {
    throw rd.fail(e.what());
  }
  if (!(m.topology() == topology))
    throw validation_error("model topology '" + topology.to_string() + "' disagrees with stored matrix shapes '" +
                           m.topology().to_string() + "'");
  return m;
}

void save_model(const MlpModel& m, const std::string& path) {
  std::ostringstream out;
  write_model(out, m);
  detail::write_file(path, out.str());
}

MlpModel load_model(const std::string& path) {
  std::istringstream in(detail::read_file(path));
  try {
    return read_model(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace mealcast
