#include "vitmem/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "vitmem/csv.hpp"
#include "vitmem/metrics.hpp"

namespace vitmem::semantics {

namespace {

// Common-noun wordlist covering the vocabulary image captioning models
// typically emit (objects, animals, people, scenes, food, vehicles).
const char* const kBuiltinNouns[] = {
    "adult", "airplane", "airport", "alley", "animal", "apartment", "apple", "aquarium", "arch",
    "arm", "armchair", "art", "athlete", "audience", "avenue", "baby", "back", "backpack",
    "backyard", "bag", "ball", "balloon", "banana", "band", "bank", "banner", "bar", "barn",
    "baseball", "basket", "basketball", "bat", "bath", "bathroom", "bathtub", "beach", "bead",
    "beak", "bean", "bear", "beard", "bed", "bedroom", "bee", "beer", "beetle", "bell", "belt",
    "bench", "berry", "bicycle", "bike", "bird", "birthday", "blanket", "blender", "block",
    "blossom", "board", "boat", "body", "bone", "book", "bookshelf", "boot", "bottle", "boulder",
    "bouquet", "bow", "bowl", "box", "boy", "bracelet", "branch", "bread", "breakfast", "brick",
    "bride", "bridge", "broccoli", "broom", "brush", "bucket", "building", "bull", "bun", "bunch",
    "bus", "bush", "butterfly", "button", "cabin", "cabinet", "cable", "cactus", "cafe", "cage",
    "cake", "calf", "camera", "camp", "can", "canal", "candle", "candy", "canoe", "canyon", "cap",
    "car", "card", "cardboard", "carpet", "carriage", "carrot", "cart", "castle", "cat", "catcher",
    "cattle", "ceiling", "cellphone", "cemetery", "chain", "chair", "chalk", "chandelier",
    "cheese", "chef", "cherry", "chest", "chicken", "child", "chimney", "chin", "chip",
    "chocolate", "church", "circle", "city", "classroom", "cliff", "clock", "cloth", "cloud",
    "clown", "coast", "coat", "cockpit", "coffee", "coin", "collar", "column", "computer",
    "concert", "cone", "container", "cookie", "corn", "corner", "costume", "couch", "counter",
    "countryside", "couple", "court", "cow", "cowboy", "crab", "crane", "crate", "cream", "creek",
    "crib", "crosswalk", "crowd", "crown", "cup", "cupboard", "cupcake", "curb", "curtain",
    "cushion", "cyclist", "dam", "dancer", "deck", "decoration", "deer", "desert", "desk",
    "dessert", "dining", "dinner", "dirt", "dish", "display", "diver", "dock", "doctor", "dog",
    "doll", "dolphin", "dome", "donkey", "donut", "door", "doorway", "dough", "dragon", "drawer",
    "drawing", "dress", "dresser", "drink", "driver", "driveway", "drum", "duck", "dust", "eagle",
    "ear", "egg", "elephant", "engine", "entrance", "equipment", "event", "eye", "face", "factory",
    "fair", "family", "fan", "farm", "farmer", "father", "faucet", "feather", "fence", "fern",
    "ferry", "festival", "field", "finger", "fire", "firefighter", "fireplace", "firework", "fish",
    "fisherman", "flag", "flame", "flamingo", "floor", "flour", "flower", "fog", "food", "foot",
    "football", "forest", "fork", "fountain", "fox", "frame", "friend", "frisbee", "frog", "frost",
    "fruit", "fur", "furniture", "game", "garage", "garden", "garlic", "gate", "giraffe", "girl",
    "glacier", "glass", "glove", "goat", "goggles", "goose", "gorilla", "gown", "graffiti", "grandmother", "grape", "grass", "grill", "ground", "group", "guitar", "gun",
    "guy", "gym", "hair", "hall", "hallway", "hand", "handle", "hanger", "harbor", "hat", "hay",
    "head", "headlight", "hedge", "helicopter", "helmet", "hen", "herd", "highway", "hill",
    "hillside", "hole", "home", "hood", "hoof", "horizon", "horn", "horse", "hose", "hospital",
    "hotel", "house", "hut", "ice", "icing", "infant", "insect", "intersection", "island",
    "jacket", "jar", "jeans", "jeep", "jet", "jewelry", "jockey", "juice", "jungle", "kangaroo",
    "kayak", "ketchup", "kettle", "key", "keyboard", "kid", "kitchen", "kite", "kitten", "knee",
    "knife", "knob", "lab", "label", "ladder", "lady", "lake", "lamb", "lamp", "land", "landscape",
    "lane", "lantern", "lap", "laptop", "lawn", "leaf", "leash", "leg", "lemon", "letter",
    "lettuce", "library", "license", "lid", "light", "lighthouse", "lightning", "lily", "limb",
    "line", "lion", "lip", "liquid", "living", "lizard", "lobby", "log", "lot", "luggage", "lunch",
    "machine", "magazine", "mailbox", "man", "mane", "mango", "mannequin", "mantle", "map",
    "marble", "market", "mask", "mat", "match", "mattress", "meadow", "meal", "meat", "medal",
    "menu", "metal", "meter", "microphone", "microwave", "milk", "mirror", "mitt", "mixer",
    "model", "monitor", "monkey", "monument", "moon", "moped", "morning", "mosque", "moss",
    "mother", "motorcycle", "mountain", "mountainside", "mouse", "mouth", "movie", "mud", "mug",
    "muscle", "museum", "mushroom", "musician", "mustache", "napkin", "neck", "necklace", "nest",
    "net", "newspaper", "night", "noodle", "nose", "notebook", "number", "nurse", "nut", "oar",
    "ocean", "office", "officer", "onion", "orange", "ornament", "ostrich", "outfit", "oven",
    "owl", "ox", "pad", "paddle", "page", "painting", "pair", "pajamas", "palace", "palm", "pan",
    "pancake", "panda", "pant", "paper", "parade", "park", "parrot", "passenger", "pasta",
    "pastry", "path", "pathway", "patio", "pattern", "pavement", "paw", "pea", "peach", "peacock",
    "peak", "pear", "pedestrian", "pen", "pencil", "penguin", "people", "pepper", "performer",
    "person", "pet", "phone", "photo", "photograph", "photographer", "piano", "picnic", "picture",
    "pie", "pier", "pig", "pigeon", "pile", "pillar", "pillow", "pilot", "pine", "pineapple",
    "pitcher", "pizza", "plane", "plant", "plantation", "plate", "platform", "player",
    "playground", "plaza", "pole", "police", "policeman", "pond", "pony", "pool", "porch", "port",
    "poster", "pot", "potato", "pottery", "print", "produce", "pumpkin", "puppy", "purse",
    "rabbit", "raccoon", "race", "rack", "racket", "radio", "raft", "rail", "railing", "railroad",
    "railway", "rain", "rainbow", "ramp", "ranch", "refrigerator", "remote", "restaurant",
    "ribbon", "rice", "rider", "ring", "river", "road", "roadside", "rock", "rod", "roll", "roof",
    "room", "rooster", "rope", "rose", "row", "rug", "ruin", "runway", "sail", "sailboat", "salad",
    "sand", "sandal", "sandwich", "sauce", "sausage", "scaffold", "scarf", "scene", "school",
    "scissors", "scooter", "screen", "sculpture", "sea", "seagull", "seal", "seat", "seaweed",
    "sedan", "seed", "shade", "shadow", "shark", "shed", "sheep", "sheet", "shelf", "shell",
    "ship", "shirt", "shoe", "shop", "shore", "shoreline", "shorts", "shoulder", "shower", "shrub",
    "side", "sidewalk", "sign", "signal", "silverware", "sink", "skateboard", "skateboarder",
    "skater", "ski", "skier", "skillet", "skirt", "sky", "skyline", "skyscraper", "sled", "slice",
    "slide", "slope", "smile", "smoke", "snack", "snake", "sneaker", "snow", "snowboard",
    "snowboarder", "soccer", "sock", "sofa", "soldier", "soup", "spectator", "spinach", "spire",
    "sponge", "spoon", "sport", "spot", "spray", "squash", "squirrel", "stack", "stadium", "stage",
    "stair", "staircase", "stairway", "stall", "stand", "star", "station", "statue", "steak",
    "steam", "steeple", "stem", "step", "stick", "stone", "stool", "stop", "store", "storefront",
    "storm", "stove", "stream", "street", "streetlight", "string", "stripe", "stroller",
    "structure", "stump", "suit", "suitcase", "sun", "sunflower", "sunglasses", "sunlight",
    "sunset", "surface", "surfboard", "surfer", "sweater", "swimmer", "swing", "sword", "table",
    "tablecloth", "tail", "tank", "tarmac", "tarp", "tattoo", "taxi", "tea", "teacher", "team",
    "teddy", "telephone", "television", "temple", "tennis", "tent", "terrace", "thumb", "ticket",
    "tie", "tiger", "tile", "tire", "toast", "toddler", "toilet", "tomato", "tongue", "tool",
    "tooth", "toothbrush", "top", "tower", "town", "toy", "track", "tractor", "traffic", "trail",
    "trailer", "train", "tray", "tree", "trick", "truck", "trunk", "tub", "tube", "tulip",
    "tunnel", "turkey", "turtle", "tusk", "tv", "twig", "umbrella", "uniform", "utensil", "valley",
    "van", "vase", "vegetable", "vehicle", "vendor", "vest", "village", "vine", "vineyard",
    "volleyball", "wagon", "waiter", "walkway", "wall", "wallet", "walnut", "warehouse", "watch",
    "water", "waterfall", "wave", "weather", "weed", "wetsuit", "whale", "wheat", "wheel",
    "wheelchair", "whisker", "wildflower", "wind", "windmill", "window", "windshield", "wine",
    "wing", "winter", "wire", "wolf", "woman", "wood", "woodland", "wool", "worker", "wrist",
    "yacht", "yard", "zebra", "zoo",
};

const std::pair<const char*, const char*> kIrregulars[] = {
    {"men", "man"},       {"women", "woman"},   {"children", "child"}, {"people", "person"},
    {"feet", "foot"},     {"teeth", "tooth"},   {"mice", "mouse"},     {"geese", "goose"},
    {"oxen", "ox"},       {"wolves", "wolf"},   {"leaves", "leaf"},    {"loaves", "loaf"},
    {"shelves", "shelf"}, {"calves", "calf"},   {"knives", "knife"},   {"lives", "life"},
    {"wives", "wife"},    {"sheep", "sheep"},   {"deer", "deer"},      {"fish", "fish"},
    {"scissors", "scissors"},
};

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::optional<std::string> Lexicon::lemma(const std::string& word) const {
    const std::string w = lowercase(word);
    if (auto it = irregular_plurals.find(w); it != irregular_plurals.end()) return it->second;
    if (nouns.count(w)) return w;
    // suffix rules, accepted only when the candidate is a known lemma
    auto try_suffix = [&](const char* suf, const char* repl) -> std::optional<std::string> {
        const std::size_t sl = std::strlen(suf);
        if (w.size() <= sl || w.compare(w.size() - sl, sl, suf) != 0) return std::nullopt;
        const std::string cand = w.substr(0, w.size() - sl) + repl;
        if (nouns.count(cand)) return cand;
        return std::nullopt;
    };
    if (auto c = try_suffix("ies", "y")) return c;
    if (auto c = try_suffix("ves", "f")) return c;
    if (auto c = try_suffix("ves", "fe")) return c;
    if (auto c = try_suffix("es", "")) return c;
    if (auto c = try_suffix("s", "")) return c;
    return std::nullopt;
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = [] {
        Lexicon l;
        for (const char* n : kBuiltinNouns) l.nouns.insert(n);
        for (const auto& [p, s] : kIrregulars) l.irregular_plurals[p] = s;
        return l;
    }();
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open lexicon " + path);
    Lexicon l;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("@irregular ", 0) == 0) {
            std::istringstream is(line.substr(11));
            std::string plural, singular;
            if (!(is >> plural >> singular))
                throw Error(path + ":" + std::to_string(lineno) +
                            ": @irregular needs '<plural> <singular>'");
            l.irregular_plurals[lowercase(plural)] = lowercase(singular);
        } else {
            l.nouns.insert(lowercase(line));
        }
    }
    return l;
}

std::vector<CaptionRecord> load_captions(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open captions " + path);
    std::string line;
    if (!std::getline(f, line) || csv::parse_line(line) != std::vector<std::string>{"id", "caption"})
        throw Error("caption file must start with header 'id,caption': " + path);
    std::vector<CaptionRecord> out;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = csv::parse_line(line);
        if (fields.size() != 2)
            throw Error(path + ":" + std::to_string(lineno) + ": expected id,caption");
        out.push_back({fields[0], fields[1]});
    }
    return out;
}

std::vector<std::string> extract_nouns(const std::string& caption, const Lexicon& lexicon) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        if (const auto lem = lexicon.lemma(token); lem && seen.insert(*lem).second)
            out.push_back(*lem);
        token.clear();
    };
    for (char c : caption) {
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'')
            token += c;
        else
            flush();
    }
    flush();
    return out;
}

std::vector<NounStat> noun_stats(const std::vector<CaptionRecord>& captions,
                                 const std::unordered_map<std::string, double>& scores,
                                 const Lexicon& lexicon) {
    std::map<std::string, std::pair<std::size_t, double>> acc;  // noun -> (count, score sum)
    for (const auto& cap : captions) {
        const auto it = scores.find(cap.id);
        if (it == scores.end()) throw Error("no score for caption id: " + cap.id);
        for (const auto& noun : extract_nouns(cap.caption, lexicon)) {
            auto& [count, sum] = acc[noun];
            ++count;
            sum += it->second;
        }
    }
    std::vector<NounStat> out;
    out.reserve(acc.size());
    for (const auto& [noun, cs] : acc)
        out.push_back({noun, cs.first, cs.second / static_cast<double>(cs.first)});
    return out;
}

std::vector<NounStat> filter_percentile(const std::vector<NounStat>& stats, double pct) {
    if (pct < 0.0 || pct >= 100.0) throw Error("percentile must be in [0,100)");
    if (stats.empty()) return {};
    std::vector<double> counts;
    counts.reserve(stats.size());
    for (const auto& s : stats) counts.push_back(static_cast<double>(s.count));
    std::sort(counts.begin(), counts.end());
    // nearest-rank: smallest value whose cumulative rank covers pct
    const auto rank = static_cast<std::size_t>(
        std::max(1.0, std::ceil(pct / 100.0 * static_cast<double>(counts.size()))));
    const double cutoff = counts[rank - 1];
    std::vector<NounStat> out;
    for (const auto& s : stats)
        if (static_cast<double>(s.count) > cutoff) out.push_back(s);
    return out;
}

MatchResult match_and_correlate(const std::vector<NounStat>& a, const std::vector<NounStat>& b) {
    std::unordered_map<std::string, const NounStat*> bmap;
    for (const auto& s : b) bmap[s.noun] = &s;
    MatchResult res;
    std::vector<double> xs, ys;
    for (const auto& s : a) {
        const auto it = bmap.find(s.noun);
        if (it == bmap.end()) continue;
        res.table.push_back({s.noun, s.count, s.mean_score, it->second->count,
                             it->second->mean_score});
        xs.push_back(s.mean_score);
        ys.push_back(it->second->mean_score);
    }
    if (res.table.size() < 2)
        throw Error("only " + std::to_string(res.table.size()) +
                    " matched nouns; correlation undefined");
    res.spearman_rho = metrics::spearman(xs, ys);
    res.r_squared = metrics::r_squared(xs, ys);
    return res;
}

void save_noun_csv(const std::vector<MatchedNoun>& table, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "noun,count_a,mean_a,count_b,mean_b\n";
    f.precision(17);
    for (const auto& r : table)
        f << csv::quote_field(r.noun) << ',' << r.count_a << ',' << r.mean_a << ',' << r.count_b
          << ',' << r.mean_b << '\n';
}

std::vector<MatchedNoun> load_noun_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line != "noun,count_a,mean_a,count_b,mean_b")
        throw Error("bad noun report header in " + path);
    std::vector<MatchedNoun> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = csv::parse_line(line);
        if (fields.size() != 5) throw Error("bad noun report row: " + line);
        out.push_back({fields[0], std::stoull(fields[1]), std::stod(fields[2]),
                       std::stoull(fields[3]), std::stod(fields[4])});
    }
    return out;
}

LinearFit least_squares(const std::vector<MatchedNoun>& table) {
    if (table.size() < 2) throw Error("least squares needs at least 2 points");
    double mx = 0, my = 0;
    for (const auto& r : table) {
        mx += r.mean_a;
        my += r.mean_b;
    }
    mx /= static_cast<double>(table.size());
    my /= static_cast<double>(table.size());
    double sxy = 0, sxx = 0;
    for (const auto& r : table) {
        sxy += (r.mean_a - mx) * (r.mean_b - my);
        sxx += (r.mean_a - mx) * (r.mean_a - mx);
    }
    if (sxx == 0) throw Error("least squares undefined for constant x");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

void save_noun_svg(const std::vector<MatchedNoun>& table, const std::string& path) {
    if (table.empty()) throw Error("cannot plot an empty noun table");
    const LinearFit fit = least_squares(table);
    double lo = 1e300, hi = -1e300;
    for (const auto& r : table) {
        lo = std::min({lo, r.mean_a, r.mean_b});
        hi = std::max({hi, r.mean_a, r.mean_b});
    }
    if (hi <= lo) hi = lo + 1e-6;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    constexpr double kSize = 560.0, kMargin = 40.0;
    auto px = [&](double v) { return kMargin + (v - lo) / (hi - lo) * kSize; };
    auto py = [&](double v) { return kMargin + kSize - (v - lo) / (hi - lo) * kSize; };

    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f.precision(12);
    const double total = kSize + 2 * kMargin;
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
      << "\" viewBox=\"0 0 " << total << " " << total << "\">\n";
    f << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (const auto& r : table)
        f << "  <circle cx=\"" << px(r.mean_a) << "\" cy=\"" << py(r.mean_b)
          << "\" r=\"3\" fill=\"#1f77b4\" fill-opacity=\"0.6\"><title>" << r.noun
          << "</title></circle>\n";
    f << "  <line class=\"fit\" data-slope=\"" << fit.slope << "\" data-intercept=\""
      << fit.intercept << "\" x1=\"" << px(lo) << "\" y1=\"" << py(fit.intercept + fit.slope * lo)
      << "\" x2=\"" << px(hi) << "\" y2=\"" << py(fit.intercept + fit.slope * hi)
      << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    f << "</svg>\n";
}

}  // namespace vitmem::semantics
