#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcomm/mln.hpp"

namespace kcomm {

struct ImdbMovie {
  std::string id;
  std::string title;
  std::vector<std::string> genres;
  std::optional<double> rating;
};

struct ImdbPerson {
  std::string id;
  std::string name;
};

struct ImdbRecords {
  std::vector<ImdbMovie> movies;
  std::vector<ImdbPerson> people;
  std::vector<std::pair<std::string, std::string>> acts_in;  // (person, movie)
  std::vector<std::pair<std::string, std::string>> directs;  // (person, movie)
};

enum class GenreOverlap { MinDenominator, Jaccard };

inline const LayerId kActorLayer = "A";
inline const LayerId kDirectorLayer = "D";
inline const LayerId kMovieLayer = "M";

/// Rating class 0..4 for [0,2), [2,4), [4,6), [6,8), [8,10].
/// Throws InvariantViolation outside [0, 10].
int rating_class(double rating);

/// Genre-set similarity; 0 when either set is empty.
double genre_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b, GenreOverlap mode);

/// Reads the four IMDb-style TSV files. Columns are located by header name
/// (movies: tconst, primaryTitle, genres, averageRating; people: nconst,
/// primaryName; acts/directs: nconst, tconst); "\N" marks a missing value.
/// Throws IoError, ParseError.
ImdbRecords load_imdb_records(const std::filesystem::path& movies, const std::filesystem::path& people,
                              const std::filesystem::path& acts, const std::filesystem::path& directs);

/// Builds the actor (A), director (D) and movie (M) layers and the A-D, D-M
/// and A-M inter-layer edge sets. Node ids are dense: actors, then
/// directors, then movies, each ordered by record id.
/// Throws ReferentialIntegrity, EmptyInput.
MLN ingest_imdb(const ImdbRecords& records, double genre_overlap_threshold = 0.5,
                GenreOverlap mode = GenreOverlap::MinDenominator);

}  // namespace kcomm
