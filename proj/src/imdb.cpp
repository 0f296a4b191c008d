#include "kcomm/imdb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include "kcomm/error.hpp"

namespace kcomm {
namespace {

constexpr std::string_view kMissing = "\\N";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

// Streams the rows of a headed TSV, handing over the requested columns.
template <typename F>
void read_table(const std::filesystem::path& path, const std::vector<std::string>& columns, F&& row) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, path.string() + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, '\t');
  std::vector<std::size_t> index;
  for (const auto& c : columns) {
    auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) throw Error(ErrorKind::ParseError, path.string() + ": no column '" + c + "'");
    index.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::size_t number = 1;
  std::vector<std::string> values(columns.size());
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::ParseError, path.string() + ": line " + std::to_string(number) + ": expected " +
                                             std::to_string(header.size()) + " columns");
    }
    for (std::size_t i = 0; i < index.size(); ++i) values[i] = fields[index[i]];
    row(values, number);
  }
}

void add_clique(const std::vector<NodeId>& members, std::vector<NodePair>& edges) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) edges.emplace_back(members[i], members[j]);
  }
}

}  // namespace

int rating_class(double rating) {
  if (!(rating >= 0.0 && rating <= 10.0)) {
    throw Error(ErrorKind::InvariantViolation, "rating " + std::to_string(rating) + " outside [0, 10]");
  }
  int c = 0;
  for (double bound : {2.0, 4.0, 6.0, 8.0}) c += rating >= bound;
  return c;
}

double genre_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b, GenreOverlap mode) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  if (sa.empty() || sb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& g : sa) common += sb.contains(g);
  const std::size_t den = mode == GenreOverlap::Jaccard ? sa.size() + sb.size() - common : std::min(sa.size(), sb.size());
  return static_cast<double>(common) / static_cast<double>(den);
}

ImdbRecords load_imdb_records(const std::filesystem::path& movies, const std::filesystem::path& people,
                              const std::filesystem::path& acts, const std::filesystem::path& directs) {
  ImdbRecords r;
  read_table(movies, {"tconst", "primaryTitle", "genres", "averageRating"}, [&](const auto& v, std::size_t line) {
    ImdbMovie m{v[0], v[1], {}, std::nullopt};
    if (v[2] != kMissing && !v[2].empty()) m.genres = split(v[2], ',');
    if (v[3] != kMissing && !v[3].empty()) {
      double x{};
      auto [p, ec] = std::from_chars(v[3].data(), v[3].data() + v[3].size(), x);
      if (ec != std::errc() || p != v[3].data() + v[3].size()) {
        throw Error(ErrorKind::ParseError, movies.string() + ": line " + std::to_string(line) + ": bad rating");
      }
      m.rating = x;
    }
    r.movies.push_back(std::move(m));
  });
  read_table(people, {"nconst", "primaryName"}, [&](const auto& v, std::size_t) { r.people.push_back({v[0], v[1]}); });
  read_table(acts, {"nconst", "tconst"}, [&](const auto& v, std::size_t) { r.acts_in.emplace_back(v[0], v[1]); });
  read_table(directs, {"nconst", "tconst"}, [&](const auto& v, std::size_t) { r.directs.emplace_back(v[0], v[1]); });
  return r;
}

MLN ingest_imdb(const ImdbRecords& records, double genre_overlap_threshold, GenreOverlap mode) {
  if (records.movies.empty() || records.people.empty()) {
    throw Error(ErrorKind::EmptyInput, "IMDb records need at least one movie and one person");
  }
  std::map<std::string, const ImdbMovie*> movies;
  std::map<std::string, const ImdbPerson*> people;
  for (const auto& m : records.movies) {
    if (!movies.emplace(m.id, &m).second) throw Error(ErrorKind::ReferentialIntegrity, "duplicate movie " + m.id);
  }
  for (const auto& p : records.people) {
    if (!people.emplace(p.id, &p).second) throw Error(ErrorKind::ReferentialIntegrity, "duplicate person " + p.id);
  }
  auto check = [&](const auto& rel, const char* what) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [person, movie] : rel) {
      if (!people.contains(person)) {
        throw Error(ErrorKind::ReferentialIntegrity, std::string(what) + " references unknown person " + person);
      }
      if (!movies.contains(movie)) {
        throw Error(ErrorKind::ReferentialIntegrity, std::string(what) + " references unknown movie " + movie);
      }
      out.emplace(person, movie);
    }
    return out;
  };
  const auto acts = check(records.acts_in, "acts_in");
  const auto directs = check(records.directs, "directs");

  // dense ids: actors, then directors, then movies
  std::map<std::string, NodeId> actor_id, director_id, movie_id;
  std::uint32_t next = 0;
  for (const auto& [person, movie] : acts) actor_id.emplace(person, NodeId());
  for (const auto& [person, movie] : directs) director_id.emplace(person, NodeId());
  for (auto& [k, id] : actor_id) id = NodeId(next++);
  for (auto& [k, id] : director_id) id = NodeId(next++);
  for (const auto& [k, m] : movies) movie_id.emplace(k, NodeId(next++));

  std::map<std::string, std::vector<NodeId>> cast, directors_of;
  for (const auto& [person, movie] : acts) cast[movie].push_back(actor_id.at(person));
  for (const auto& [person, movie] : directs) directors_of[movie].push_back(director_id.at(person));

  auto layer = [&](const LayerId& id, const std::map<std::string, NodeId>& ids, auto label_of,
                   const std::vector<NodePair>& edges) {
    std::vector<NodeId> nodes;
    std::map<NodeId, std::string> labels;
    for (const auto& [key, n] : ids) {
      nodes.push_back(n);
      if (auto label = label_of(key); !label.empty()) labels.emplace(n, std::move(label));
    }
    return LayerGraph(id, std::move(nodes), edges, std::move(labels));
  };
  auto person_name = [&](const std::string& key) { return people.at(key)->name; };

  std::vector<NodePair> actor_edges;
  for (const auto& [movie, actors] : cast) add_clique(actors, actor_edges);

  std::map<NodeId, std::set<std::string>> genres_of;
  for (const auto& [person, movie] : directs) {
    const auto& g = movies.at(movie)->genres;
    genres_of[director_id.at(person)].insert(g.begin(), g.end());
  }
  std::vector<std::pair<NodeId, std::vector<std::string>>> profiles;
  for (const auto& [d, g] : genres_of) profiles.emplace_back(d, std::vector<std::string>(g.begin(), g.end()));
  std::vector<NodePair> director_edges;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      if (profiles[i].second.empty() || profiles[j].second.empty()) continue;
      if (genre_overlap(profiles[i].second, profiles[j].second, mode) >= genre_overlap_threshold) {
        director_edges.emplace_back(profiles[i].first, profiles[j].first);
      }
    }
  }

  std::vector<std::vector<NodeId>> classes(5);
  for (const auto& [key, m] : movies) {
    if (m->rating) classes[rating_class(*m->rating)].push_back(movie_id.at(key));
  }
  std::vector<NodePair> movie_edges;
  for (const auto& c : classes) add_clique(c, movie_edges);

  MLN mln;
  mln.add_layer(layer(kActorLayer, actor_id, person_name, actor_edges));
  mln.add_layer(layer(kDirectorLayer, director_id, person_name, director_edges));
  mln.add_layer(layer(
      kMovieLayer, movie_id, [&](const std::string& key) { return movies.at(key)->title; }, movie_edges));

  InterLayerEdges ad{kActorLayer, kDirectorLayer, {}};
  InterLayerEdges dm{kDirectorLayer, kMovieLayer, {}};
  InterLayerEdges am{kActorLayer, kMovieLayer, {}};
  for (const auto& [person, movie] : acts) {
    am.links.emplace_back(actor_id.at(person), movie_id.at(movie));
    if (auto it = directors_of.find(movie); it != directors_of.end()) {
      for (auto d : it->second) ad.links.emplace_back(actor_id.at(person), d);
    }
  }
  for (const auto& [person, movie] : directs) dm.links.emplace_back(director_id.at(person), movie_id.at(movie));
  for (auto* x : {&ad, &dm, &am}) {
    if (!x->links.empty()) mln.add_interlayer(std::move(*x));
  }
  return mln;
}

}  // namespace kcomm
