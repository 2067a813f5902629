// Generates the bundled open sample corpus: a synthetic, fully segmented US
// reference dataset in the toolkit CSV schema. Output is deterministic, so
// the committed data/sample_corpus.csv can always be regenerated bit-exactly.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addrbench/address_model.hpp"
#include "addrbench/dataset_pipeline.hpp"
#include "addrbench/rng.hpp"

namespace {

using addrbench::AddressRecord;
using addrbench::ComponentLabel;
using addrbench::RandomSource;

constexpr std::uint64_t kCorpusSeed = 0xC0FFEE5EEDULL;

const char* kStates[] = {
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "DC", "FL", "GA",
    "HI", "ID", "IL", "IN", "IA", "KS", "KY", "LA", "ME", "MD", "MA",
    "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM", "NY",
    "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX",
    "UT", "VT", "VA", "WA", "WV", "WI", "WY",
};

const char* kStreetStems[] = {
    "OAK", "MAPLE", "CEDAR", "PINE", "ELM", "WALNUT", "BIRCH", "ASPEN",
    "WILLOW", "HICKORY", "CHESTNUT", "SYCAMORE", "JUNIPER", "MAGNOLIA",
    "DOGWOOD", "HAWTHORN", "LAUREL", "POPLAR", "SPRUCE", "CYPRESS",
    "BROOKWOOD", "DORY", "LUKE", "HUNTERS", "FOX", "DEER", "EAGLE", "FALCON",
    "HERON", "OSPREY", "PELICAN", "QUAIL", "RAVEN", "SPARROW", "WREN",
    "BLUEBIRD", "CARDINAL", "MOCKINGBIRD", "ORIOLE", "TANAGER", "COPPER",
    "SILVER", "GOLDEN", "IRON", "GRANITE", "FLINT", "BOULDER", "PEBBLE",
    "STONE", "SLATE", "AMBER", "CRYSTAL", "IVORY", "SCARLET", "INDIGO",
    "CRIMSON", "SAFFRON", "COBALT", "EMERALD", "GARNET", "HARVEST", "MEADOWLARK",
    "ORCHARD", "VINEYARD", "PRAIRIE", "SAVANNA", "TIMBER", "WOODLAND",
    "FERN", "CLOVER", "THISTLE", "BRAMBLE", "HEATHER", "MOSS", "SAGE",
    "ROSEMARY", "LAVENDER", "JASMINE", "PRIMROSE", "TULIP", "AZALEA",
    "CAMELLIA", "GARDENIA", "HIBISCUS", "LILAC", "MARIGOLD", "PEONY",
    "VERBENA", "WISTERIA", "ZINNIA", "ANCHOR", "BEACON", "COMPASS",
    "HARBORVIEW", "LIGHTHOUSE", "MARINER", "SCHOONER", "SEABREEZE",
    "TIDEWATER", "WHARF", "BARLOW", "CALDWELL", "DALTON", "EMERSON",
    "FAIRFAX", "GRISWOLD", "HOLBROOK", "IRVING", "JARVIS", "KENDALL",
    "LOCKWOOD", "MERCER", "NORWOOD", "OGDEN", "PRESCOTT", "QUIMBY",
    "RUTLEDGE", "SHELDON", "THORNTON", "UPTON", "VANCE", "WHITFIELD",
    "YARDLEY", "ABBOT", "BENTLEY", "CARSON", "DRAPER", "ELLSWORTH",
};

// Second words for two-word street names.
const char* kStreetSeconds[] = {
    "HILLS", "GLENN", "CREST", "WOODS", "FIELDS", "ACRES", "BLUFF",
    "HOLLOWAY", "RIDGELINE", "CROSSROADS", "MILL", "FORGE", "TRACE",
    "CHASE", "POINTE", "SUMMIT", "TERRACEVIEW", "OVERLOOK", "CANYON",
    "RAVINE",
};

// Hosts for partial-abbreviation variation; these appear as the second
// word of a street base name.
const char* kAbbrHosts[] = {
    "MOUNTAIN", "HEIGHTS", "SPRING", "VILLAGE", "VALLEY", "MEADOW",
    "RIVER", "LAKE", "RIDGE", "CREEK", "POINT", "HARBOR", "CENTER",
    "RANCH", "FOREST", "ESTATES", "LANDING", "JUNCTION", "GARDENS",
    "CROSSING",
};

const char* kSpanishStreets[] = {
    "LA MESA", "LA BREA", "LA CRESTA", "LA CIENEGA", "EL CAMINO",
    "EL DORADO", "EL MONTE", "LOS ROBLES", "LOS ALTOS", "LOS FELIZ",
    "LAS FLORES", "LAS PALMAS", "LAS LOMAS", "DEL MAR", "DEL REY",
    "DEL NORTE", "DE SOTO", "DE LEON",
};

const char* kRoadTypes[] = {
    "ST", "AVE", "RD", "DR", "LN", "CT", "CIR", "BLVD",
    "WAY", "PL", "TER", "HWY", "PKWY", "TRL", "LOOP", "XING",
};

const char* kDirectionalAbbrs[] = {"N", "S", "E", "W", "NE", "NW", "SE", "SW"};
const char* kDirectionalFulls[] = {"NORTH", "SOUTH", "EAST", "WEST"};

// City name stems; none of these words appear in the road-type lexicon.
const char* kCityStems[] = {
    "OZARK", "SALVO", "LAREDO", "TOLEDO", "AKRON", "FRESNO", "MACON",
    "SPARTA", "DOVER", "KEENE", "BANGOR", "ALTURAS", "BRISTOL", "CAMDEN",
    "DECATUR", "EUREKA", "FAIRMONT", "GALENA", "HELENA", "IRONTON",
    "JASPER", "KINGSTON", "LEBANON", "MADISON", "NEWPORT", "OBERLIN",
    "PALMYRA", "QUINCY", "RAMONA", "SELMA", "TRENTON", "URBANA", "VERONA",
    "WINONA", "XENIA", "YAZOO", "ZEBULON", "ARCADIA", "BERWYN", "CHANUTE",
    "DURANGO", "ELKHART", "FOSTORIA", "GREELEY", "HANNIBAL", "ITHACA",
    "JOPLIN", "KOKOMO", "LIMA", "MENTOR", "NAMPA", "OLATHE", "PADUCAH",
    "ROSWELL", "SEDALIA", "TIFFIN", "UKIAH", "VISALIA", "WAUSAU", "YUMA",
    "ALBANY", "BUTTE", "CONCORD", "DENTON", "ENID", "FARGO", "GADSDEN",
    "HIBBING", "INDIO", "JULIET", "KEARNEY", "LOMPOC", "MODESTO", "NORMAN",
    "OSWEGO", "POMONA", "RUSTON", "SALINA", "TUPELO", "UVALDE", "VENTURA",
    "WACO", "YONKERS", "ZANESVILLE", "ABILENE", "BILOXI", "COVINA",
    "DUBUQUE", "EDISON", "FOLSOM", "GRETNA", "HOBART", "INMAN", "JACKSON",
    "KENNER", "LORAIN", "MUNCIE", "NILES", "OPELIKA", "PUEBLO", "RACINE",
    "SHAWNEE", "TACOMA", "UPLAND", "VALLEJO", "WICHITA", "HAZEL",
};

const char* kCitySeconds[] = {
    "CITY", "FALLS", "ROCK", "GREEN", "SPRINGS", "RAPIDS", "HAVEN",
    "BEACH", "SHORES", "PLAINS",
};

std::string ordinal(int n) {
  const int mod100 = n % 100;
  const int mod10 = n % 10;
  if (mod100 >= 11 && mod100 <= 13) return std::to_string(n) + "TH";
  if (mod10 == 1) return std::to_string(n) + "ST";
  if (mod10 == 2) return std::to_string(n) + "ND";
  if (mod10 == 3) return std::to_string(n) + "RD";
  return std::to_string(n) + "TH";
}

template <typename T, std::size_t N>
const T& pick(RandomSource& rng, const T (&pool)[N]) {
  return pool[rng.uniform_index(N)];
}

std::string make_street(RandomSource& rng) {
  const std::uint64_t roll = rng.uniform_index(100);
  if (roll < 70) return pick(rng, kStreetStems);
  if (roll < 85) {
    return std::string(pick(rng, kStreetStems)) + " " +
           pick(rng, kStreetSeconds);
  }
  if (roll < 92) return ordinal(2 + static_cast<int>(rng.uniform_index(118)));
  if (roll < 96) return pick(rng, kSpanishStreets);
  return std::string(pick(rng, kStreetStems)) + " " + pick(rng, kAbbrHosts);
}

std::vector<std::string> cities_for_state(std::size_t state_index,
                                          std::size_t count) {
  constexpr std::size_t kStemCount = std::size(kCityStems);
  std::vector<std::string> cities;
  std::set<std::string> seen;
  RandomSource rng(kCorpusSeed, "cities/" + std::string(kStates[state_index]));
  while (cities.size() < count) {
    std::string name;
    const std::size_t slot = cities.size();
    if (slot < count - 6) {
      name = kCityStems[rng.uniform_index(kStemCount)];
    } else if (slot < count - 2) {
      name = std::string(kCityStems[rng.uniform_index(kStemCount)]) + " " +
             pick(rng, kCitySeconds);
    } else {
      name = std::string(pick(rng, kDirectionalFulls)) + " " +
             kCityStems[rng.uniform_index(kStemCount)];
    }
    if (seen.insert(name).second) cities.push_back(std::move(name));
  }
  return cities;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"addrbench sample corpus generator"};
  std::string out_path = "data/sample_corpus.csv";
  int zips_per_state = 200;
  int rows_per_zip = 4;
  int cities_per_state = 24;
  app.add_option("-o,--out", out_path, "output CSV path");
  app.add_option("--zips-per-state", zips_per_state)->check(CLI::Range(1, 1900));
  app.add_option("--rows-per-zip", rows_per_zip)->check(CLI::Range(1, 40));
  app.add_option("--cities-per-state", cities_per_state)
      ->check(CLI::Range(8, 64));
  CLI11_PARSE(app, argc, argv);

  std::vector<AddressRecord> records;
  std::size_t next_id = 1;
  for (std::size_t s = 0; s < std::size(kStates); ++s) {
    const auto cities =
        cities_for_state(s, static_cast<std::size_t>(cities_per_state));
    for (int z = 0; z < zips_per_state; ++z) {
      char zip[6];
      std::snprintf(zip, sizeof(zip), "%05d",
                    1000 + static_cast<int>(s) * 1900 + z);
      RandomSource rng(kCorpusSeed, "zip/" + std::string(zip));
      const std::string& city = cities[static_cast<std::size_t>(z) %
                                       cities.size()];
      std::set<std::string> used_streets;
      for (int k = 0; k < rows_per_zip; ++k) {
        std::string street = make_street(rng);
        for (int tries = 0; used_streets.count(street) && tries < 64; ++tries) {
          street = make_street(rng);
        }
        used_streets.insert(street);

        AddressRecord r;
        char id[16];
        std::snprintf(id, sizeof(id), "r%06zu", next_id++);
        r.id = id;
        r.component(ComponentLabel::HouseNumber) =
            std::to_string(1 + rng.uniform_index(9999));
        const std::uint64_t dir_roll = rng.uniform_index(100);
        if (dir_roll < 30) {
          r.component(ComponentLabel::Predirectional) =
              pick(rng, kDirectionalAbbrs);
        } else if (dir_roll < 45) {
          r.component(ComponentLabel::Postdirectional) =
              pick(rng, kDirectionalAbbrs);
        } else if (dir_roll < 50) {
          r.component(ComponentLabel::Predirectional) =
              pick(rng, kDirectionalAbbrs);
          r.component(ComponentLabel::Postdirectional) =
              pick(rng, kDirectionalAbbrs);
        }
        r.component(ComponentLabel::StreetBaseName) = street;
        r.component(ComponentLabel::RoadType) = pick(rng, kRoadTypes);
        r.component(ComponentLabel::City) = city;
        r.component(ComponentLabel::State) = kStates[s];
        r.component(ComponentLabel::PostalCode) = zip;
        records.push_back(std::move(r));
      }
    }
  }

  std::filesystem::path path(out_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  addrbench::write_reference_csv(records, path);
  std::cerr << "wrote " << records.size() << " records to " << out_path << "\n";
  return 0;
}
