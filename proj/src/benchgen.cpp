#include "spotlight/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "spotlight/rng.hpp"
#include "spotlight/version.hpp"

namespace spotlight {

namespace {

// ---------------------------------------------------------------------------
// word pools

/// Draws pool items in shuffled cycles so realized frequencies stay flat.
class CyclingPool {
public:
    CyclingPool(std::vector<std::string> items, Rng& rng) : items_(std::move(items)), rng_(rng) {
        order_.resize(items_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
        pos_ = order_.size();
    }

    const std::string& draw() {
        if (pos_ == order_.size()) {
            rng_.shuffle(order_);
            pos_ = 0;
        }
        return items_[order_[pos_++]];
    }

private:
    std::vector<std::string> items_;
    std::vector<std::size_t> order_;
    std::size_t pos_;
    Rng& rng_;
};

std::vector<std::string> surname_pool() {
    static const char* starts[] = {"Al",  "Ber", "Cal", "Dor", "El",  "Far", "Gar",
                                   "Hol", "Ira", "Jen", "Kel", "Lor", "Mar", "Nor",
                                   "Ost", "Pel", "Quin", "Ros", "Sal", "Tor"};
    static const char* ends[] = {"ban",  "berg", "dale", "den", "field", "ford",
                                 "gate", "land", "ley",  "low", "man",   "mont",
                                 "sen",  "son",  "ton",  "well"};
    std::vector<std::string> pool;
    for (const char* s : starts) {
        for (const char* e : ends) pool.push_back(std::string(s) + e);
    }
    return pool;
}

std::vector<std::string> time_pool() {
    std::vector<std::string> pool;
    for (int h : {7, 8, 9}) {
        for (int m = 0; m < 60; m += 1) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%d:%02d", h, m);
            pool.emplace_back(buf);
        }
    }
    return pool;
}

std::vector<std::string> age_pool() {
    std::vector<std::string> pool;
    for (int a = 23; a <= 78; ++a) pool.push_back(std::to_string(a) + "-year-old");
    return pool;
}

std::vector<std::string> number_pool() {
    std::vector<std::string> pool;
    for (int v = 4; v <= 40; ++v) pool.push_back(std::to_string(v));
    return pool;
}

const std::vector<std::string> kCities = {
    "Ashford",  "Brinmore", "Calder",   "Deloran",  "Eastvale", "Fenwick",  "Granby",
    "Harlow",   "Inverton", "Jasperton","Kendrick", "Larkspur", "Midvale",  "Norbury",
    "Oakhaven", "Pinefield","Quarry",   "Redmoor",  "Seabrook", "Telford",  "Umberton",
    "Vantage",  "Westmere", "Yardley",  "Zephyr",   "Bexley",   "Corwood",  "Drayton",
    "Elmsworth","Foxglove", "Greystone","Hartwick", "Ivydale",  "Juniper",  "Kingsmere",
    "Lindenrow","Mossbank", "Nettleton","Ortega",   "Pellworth"};

const std::vector<std::string> kComplaints = {
    "headaches",   "dizziness",   "insomnia",   "fatigue",    "heartburn",  "wheezing",
    "backaches",   "migraines",   "numbness",   "cramps",     "soreness",   "stiffness",
    "nausea",      "palpitations","tinnitus",   "vertigo",    "coughing",   "sneezing",
    "itchiness",   "bloating",    "chills",     "hoarseness", "tremors",    "blisters",
    "swelling",    "bruising",    "rashes",     "shivers",    "twitching",  "aching",
    "congestion",  "drowsiness",  "restlessness","lightheadedness", "earaches", "toothaches"};

const std::vector<std::string> kCouriers = {
    "Archway",   "Bluebird", "Cartwheel", "Dispatch", "Everline", "Fleetway", "Gallop",
    "Hummingbird","Ironside","Jetstream", "Kestrel",  "Lantern",  "Milepost", "Nightowl",
    "Overland",  "Packhorse","Quickstep", "Roadrunner","Swallow", "Turnpike", "Umbrella",
    "Vanguard",  "Wayfarer", "Xpresso",   "Yonder",   "Zigzag",   "Beacon",   "Compass",
    "Drifter",   "Errand"};

const std::vector<std::string> kWards = {
    "cardiology", "oncology",  "pediatrics", "radiology", "neurology", "orthopedics",
    "geriatrics", "maternity", "pulmonology","nephrology","dermatology","hematology"};

const std::vector<std::string> kConditions = {
    "hypertension", "bronchitis",  "tendonitis",  "anemia",       "asthma",      "arthritis",
    "sinusitis",    "dermatitis",  "gastritis",   "sciatica",     "laryngitis",  "tonsillitis",
    "pneumonia",    "shingles",    "gallstones",  "appendicitis", "bursitis",    "conjunctivitis",
    "diverticulitis","eczema",     "fibromyalgia","gout",         "hepatitis",   "hernia",
    "hypothyroidism","influenza",  "jaundice",    "kidneystones", "lumbago",     "mononucleosis",
    "neuralgia",    "osteoporosis","pancreatitis","pleurisy",     "psoriasis",   "rhinitis",
    "scoliosis",    "tachycardia", "ulcers",      "vasculitis"};

const std::vector<std::string> kFoods = {
    "lentil",   "barley",   "tomato",  "pumpkin", "chickpea", "noodle",   "minestrone",
    "mushroom", "spinach",  "carrot",  "potato",  "cabbage",  "celery",   "turnip",
    "leek",     "parsnip",  "squash",  "bean",    "pepper",   "corn",     "rice",
    "quinoa",   "couscous", "orzo",    "miso",    "udon",     "ramen",    "gumbo",
    "chowder",  "borscht"};

const std::vector<std::string> kTopics = {
    "immunology",    "telemetry",    "biostatistics", "pharmacology", "toxicology",
    "epidemiology",  "microbiology", "pathology",     "virology",     "genomics",
    "cytology",      "endocrinology","gastroenterology","rheumatology","urology",
    "anesthesiology","audiology",    "bacteriology",  "embryology",   "histology",
    "kinesiology",   "mycology",     "neonatology",   "ophthalmology","parasitology",
    "proteomics",    "psychiatry",   "serology",      "sonography",   "taxonomy",
    "teratology",    "traumatology", "vaccinology",   "venereology",  "xenobiology",
    "zoonosis",      "chronobiology","cryobiology",   "enzymology",   "morphology"};

const std::vector<std::string> kLandmarks = {
    "fountain",  "aqueduct",  "bandstand", "boathouse", "carousel",  "clocktower",
    "courthouse","drawbridge","gazebo",    "grainhouse","greenhouse","lighthouse",
    "market",    "millpond",  "monument",  "obelisk",   "orchard",   "pavilion",
    "pier",      "planetarium","reservoir","rosegarden","stadium",   "statue",
    "viaduct",   "waterwheel","windmill",  "arboretum", "amphitheater","overpass"};

// email pools

const std::vector<std::string> kCourseTopics = {
    "recursion",     "thermodynamics", "stoichiometry", "econometrics",  "morphology",
    "phonetics",     "topology",       "kinematics",    "spectroscopy",  "crystallography",
    "hydrology",     "seismology",     "volcanology",   "paleontology",  "entomology",
    "ornithology",   "limnology",      "meteorology",   "oceanography",  "cartography",
    "epistemology",  "aesthetics",     "semiotics",     "hermeneutics",  "phenomenology",
    "game-theory",   "set-theory",     "graph-theory",  "number-theory", "group-theory",
    "astrophysics",  "biomechanics",   "cryptography",  "demography",    "ethnography",
    "geodesy",       "heuristics",     "lexicography",  "mineralogy",    "petrology"};

const std::vector<std::string> kSubtopics = {
    "convergence",  "equilibrium",  "oxidation",    "elasticity",   "inflection",
    "resonance",    "diffusion",    "refraction",   "oscillation",  "precipitation",
    "sublimation",  "condensation", "polarization", "interference", "diffraction",
    "absorption",   "adsorption",   "catalysis",    "titration",    "distillation",
    "fermentation", "hydrolysis",   "photolysis",   "pyrolysis",    "electrolysis",
    "isomerism",    "chirality",    "valence",      "entropy",      "enthalpy",
    "momentum",     "torque",       "viscosity",    "turbulence",   "capacitance",
    "inductance",   "impedance",    "reactance",    "permittivity", "permeability"};

const std::vector<std::string> kItems = {
    "rubric",    "syllabus",  "outline",   "handout",  "worksheet", "dataset",
    "appendix",  "glossary",  "errata",    "preprint", "abstract",  "bibliography",
    "transcript","storyboard","flowchart", "schematic","checklist", "roadmap",
    "primer",    "workbook",  "anthology", "compendium","digest",   "addendum"};

const std::vector<std::string> kConcepts = {
    "eigenvalues",  "martingales",  "manifolds",   "functors",    "monoids",
    "lattices",     "quaternions",  "tensors",     "spinors",     "wavelets",
    "splines",      "percolation",  "annealing",   "bootstrapping","regularization",
    "quadrature",   "interpolation","extrapolation","factorization","orthogonality",
    "convexity",    "duality",      "compactness", "completeness", "continuity",
    "cardinality",  "computability","decidability","satisfiability","stationarity",
    "ergodicity",   "homotopy",     "holonomy",    "cohomology",  "bifurcation",
    "chaos",        "solitons",     "attractors",  "renormalization","gauge-invariance"};

const std::vector<std::string> kWeekdays = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                            "Friday"};

const std::vector<std::string> kFirstNames = {
    "Avery",  "Bailey", "Camden", "Devon",  "Ellis",   "Finley", "Gray",   "Harper",
    "Indigo", "Jordan", "Kendall","Logan",  "Morgan",  "Noel",   "Oakley", "Parker",
    "Quincy", "Reese",  "Sawyer", "Tatum",  "Umber",   "Vaughn", "Winter", "Xan",
    "Yael",   "Zion",   "Arden",  "Blair",  "Cassidy", "Dakota", "Emerson","Frankie",
    "Greer",  "Hollis", "Imani",  "Jules",  "Kit",     "Lennox", "Marlow", "Nico",
    "Onyx",   "Phoenix","Quill",  "Rowan",  "Shiloh",  "Teagan", "Unique", "Vesper",
    "Wren",   "Xia",    "Yuri",   "Zephyrine", "Ainsley", "Briar", "Corey", "Darby",
    "Eden",   "Flynn",  "Gale",   "Haven",  "Ira",     "Jay",    "Kai",    "Lake",
    "Meade",  "Nara",   "Ocean",  "Pax",    "Quest",   "Rain",   "Sky",    "True",
    "Urban",  "Vale",   "West",   "Xen",    "York",    "Zen",    "Asa",    "Bo"};

// review pools

const std::vector<std::string> kTitleFirst = {
    "Silent",   "Golden",  "Hidden",   "Broken",  "Distant",  "Forgotten", "Crimson",
    "Velvet",   "Hollow",  "Amber",    "Winding", "Frozen",   "Burning",   "Quiet",
    "Restless", "Wandering","Shattered","Gilded",  "Midnight", "Morning",   "Paper",
    "Glass",    "Iron",    "Copper",   "Marble",  "Granite",  "Cedar",     "Willow",
    "Juniper",  "Saffron", "Indigo",   "Scarlet", "Emerald",  "Obsidian",  "Ivory",
    "Charcoal", "Drifting","Falling",  "Rising",  "Turning",  "Spinning",  "Fading",
    "Blooming", "Racing",  "Sleeping", "Waking",  "Whispering","Roaring",  "Glowing",
    "Flickering","Northern","Southern","Eastern", "Western",  "Upper",     "Lower",
    "First",    "Last",    "Seventh",  "Ninth"};

const std::vector<std::string> kTitleSecond = {
    "Harbor",   "Orchard",  "Lantern", "Compass", "Meridian", "Causeway", "Estuary",
    "Foothill", "Garrison", "Haven",   "Isthmus", "Junction", "Knoll",    "Lagoon",
    "Meadow",   "Narrows",  "Outpost", "Paddock", "Quayside", "Ridgeline","Summit",
    "Terrace",  "Uplands",  "Valley",  "Wharf",   "Zenith",   "Archipelago","Basin",
    "Canyon",   "Delta",    "Escarpment","Fjord", "Glacier",  "Headland", "Inlet",
    "Jetty",    "Key",      "Lighthouse","Mesa",  "Nocturne", "Overture", "Prelude",
    "Quartet",  "Rhapsody", "Sonata",  "Toccata", "Unison",   "Voyage",   "Waltz",
    "Crossing", "Detour",   "Expedition","Festival","Gathering","Homecoming","Interlude",
    "Journey",  "Kingdom",  "Legacy",  "Mirage"};

const std::vector<std::string> kRoles = {
    "cartographer", "archivist",   "beekeeper",   "glassblower", "locksmith",  "shipwright",
    "printmaker",   "clockmaker",  "stonemason",  "saddler",     "cooper",     "chandler",
    "milliner",     "farrier",     "thatcher",    "wheelwright", "bookbinder", "engraver",
    "falconer",     "gardener",    "innkeeper",   "jeweler",     "lamplighter","mapmaker",
    "navigator",    "organist",    "potter",      "quilter",     "ropemaker",  "surveyor"};

const std::vector<std::string> kGoals = {
    "inherits",  "restores",  "catalogs",  "rebuilds",  "protects",  "rediscovers",
    "auctions",  "documents", "surveys",   "excavates", "transplants","salvages",
    "reopens",   "reclaims",  "untangles", "archives",  "appraises", "reassembles",
    "charts",    "shelters",  "stewards",  "revives",   "translates","inventories"};

const std::vector<std::string> kNeutralAdjectives = {
    "steady",     "measured",  "unhurried", "methodical", "deliberate", "economical",
    "restrained", "orderly",   "workmanlike","studied",   "even-handed","matter-of-fact",
    "understated","low-key",   "unshowy",   "patient",    "careful",    "systematic",
    "sturdy",     "functional","straightforward", "conventional", "familiar", "procedural"};

const std::vector<std::string> kGenres = {
    "heist",    "courtroom", "frontier", "maritime", "backstage", "roadtrip",
    "boxing",   "chess",     "cooking",  "racing",   "mountaineering", "detective"};

// ---------------------------------------------------------------------------

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

constexpr double kZipfExponent = 1.1;

/// Zipf(s) rank sampler over [0, n).
class ZipfSampler {
public:
    ZipfSampler(std::size_t n, double s) {
        cumulative_.reserve(n);
        double total = 0.0;
        for (std::size_t r = 1; r <= n; ++r) {
            total += 1.0 / std::pow(static_cast<double>(r), s);
            cumulative_.push_back(total);
        }
        for (double& c : cumulative_) c /= total;
    }

    std::size_t draw(Rng& rng) const {
        const double u = rng.uniform_real();
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
};

Group make_group(std::vector<std::string> texts, GroupLabel label, std::string provenance) {
    Group g;
    g.label = label;
    g.provenance = std::move(provenance);
    g.texts.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        g.texts.push_back(tokenize(texts[i], i));
    }
    return g;
}

std::vector<std::string> gen_story_texts(std::size_t n, Rng& rng) {
    CyclingPool times(time_pool(), rng);
    CyclingPool surnames(surname_pool(), rng);
    CyclingPool ages(age_pool(), rng);
    CyclingPool numbers(number_pool(), rng);
    CyclingPool cities(kCities, rng);
    CyclingPool complaints(kComplaints, rng);
    CyclingPool couriers(kCouriers, rng);
    CyclingPool wards(kWards, rng);
    CyclingPool conditions(kConditions, rng);
    CyclingPool foods(kFoods, rng);
    CyclingPool topics(kTopics, rng);
    CyclingPool landmarks(kLandmarks, rng);

    std::vector<std::string> texts;
    texts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::ostringstream s;
        s << "Dr. Li arrived at the clinic just before " << times.draw()
          << " and found the waiting room busy .";
        s << " He checked his schedule and asked the nurse about the first patient .";
        s << " His first appointment was a " << ages.draw() << " visitor from " << cities.draw()
          << " who described " << complaints.draw() << " in a calm voice .";
        s << " \" Him again ? \" the nurse joked when the " << couriers.draw()
          << " courier returned , and he smiled while sorting charts .";
        s << " The morning rounds took him through the " << wards.draw()
          << " ward , where he reviewed " << numbers.draw() << " charts .";
        s << " One patient , Mr. " << surnames.draw() << " , thanked him for his patience with a "
          << "stubborn case of " << conditions.draw() << " .";
        s << " Around " << times.draw() << " his colleagues stopped by to discuss "
          << conditions.draw() << " .";
        s << " At lunch he ate " << foods.draw() << " soup in the cafeteria and read about "
          << topics.draw() << " .";
        s << " The afternoon brought a consultation with Mr. " << surnames.draw()
          << " , and his notes grew to " << numbers.draw() << " pages .";
        s << " Before leaving he signed the discharge papers and told the resident to page him "
          << "later .";
        s << " He locked the office at " << times.draw()
          << " , nodded to the night staff , and drove home past the " << landmarks.draw() << " .";
        s << " His long day ended quietly , and he felt the steady satisfaction of useful work .";
        texts.push_back(s.str());
    }
    return texts;
}

std::vector<std::string> gen_email_texts(std::size_t n, Rng& rng) {
    CyclingPool surnames(surname_pool(), rng);
    CyclingPool first_names(kFirstNames, rng);
    CyclingPool course_topics(kCourseTopics, rng);
    CyclingPool subtopics(kSubtopics, rng);
    CyclingPool items(kItems, rng);
    CyclingPool concepts(kConcepts, rng);
    CyclingPool weekdays(kWeekdays, rng);

    std::vector<std::string> texts;
    texts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::ostringstream s;
        const double u = rng.uniform_real();
        const std::string prof = surnames.draw();
        if (u < 0.6) {
            s << "Dear Professor " << prof << " ,";
        } else if (u < 0.85) {
            s << "Dear Dr. " << prof << " ,";
        } else {
            s << "Dear Prof. " << prof << " ,";
        }
        s << " I hope this email finds you well .";
        s << " I am writing about the " << course_topics.draw() << " unit we covered in the "
          << weekdays.draw() << " lecture on " << subtopics.draw() << " .";
        s << " I would like to ask whether the " << items.draw()
          << " could be discussed during your office hours .";
        s << " I have to admit that the section on " << concepts.draw()
          << " was harder than I expected , and my notes are not complete .";
        s << " Could you please point me to additional reading on " << subtopics.draw()
          << " , and please let me know if a meeting on " << weekdays.draw()
          << " works for you .";
        s << " Thank you for your time and for the effort you put into the course .";
        s << (rng.bernoulli(0.5) ? " Sincerely ," : " Best regards ,");
        s << " " << first_names.draw() << " " << surnames.draw();
        texts.push_back(s.str());
    }
    return texts;
}

std::vector<std::string> gen_review_texts(std::size_t n, Rng& rng) {
    CyclingPool title_first(kTitleFirst, rng);
    CyclingPool title_second(kTitleSecond, rng);
    CyclingPool roles(kRoles, rng);
    CyclingPool cities(kCities, rng);
    CyclingPool goals(kGoals, rng);
    CyclingPool surnames(surname_pool(), rng);
    CyclingPool neutral(kNeutralAdjectives, rng);
    CyclingPool weekdays(kWeekdays, rng);
    CyclingPool genres(kGenres, rng);

    const auto& dict = default_antonyms();
    ZipfSampler zipf(dict.size(), kZipfExponent);
    // roughly one dictionary adjective per two reviews, spread over three slots
    const double dict_slot_rate = 1.0 / 6.0;
    const auto sentiment = [&]() -> const std::string& {
        if (rng.bernoulli(dict_slot_rate)) return dict[zipf.draw(rng)].first;
        return neutral.draw();
    };

    std::vector<std::string> texts;
    texts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::ostringstream s;
        s << "I watched the " << title_first.draw() << " " << title_second.draw() << " on a quiet "
          << weekdays.draw() << " evening and it stayed with me .";
        s << " The story follows a " << roles.draw() << " from " << cities.draw() << " who "
          << goals.draw() << " a family workshop .";
        s << " The direction felt " << sentiment() << " in every scene .";
        s << " The lead performance was " << sentiment() << " from start to finish .";
        s << " Critics will call the pacing " << sentiment() << " , and I agree .";
        s << " The score by " << surnames.draw() << " lifts the quieter moments .";
        s << " A few scenes in the middle run long , but the ending lands .";
        s << " I left the theater glad I went and booked a second showing for "
          << weekdays.draw() << " .";
        s << " Fans of " << genres.draw() << " films will find plenty to enjoy here .";
        texts.push_back(s.str());
    }
    return texts;
}

// ---------------------------------------------------------------------------
// transformation machinery

bool matches_at(const std::vector<std::string>& tokens, std::size_t i,
                const std::vector<std::string>& phrase) {
    if (i + phrase.size() > tokens.size()) return false;
    for (std::size_t k = 0; k < phrase.size(); ++k) {
        if (tokens[i + k] != phrase[k]) return false;
    }
    return true;
}

bool contains_phrase(const std::vector<std::string>& tokens,
                     const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        if (matches_at(tokens, i, phrase)) return true;
    }
    return false;
}

/// Replaces every (non-overlapping, left-to-right) occurrence of `original`,
/// recording one Application per site in output coordinates.
std::vector<std::string> replace_phrase(const std::vector<std::string>& tokens, std::size_t doc,
                                        const std::vector<std::string>& original,
                                        const std::vector<std::string>& replacement,
                                        std::vector<Application>& log, std::size_t* sites) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (matches_at(tokens, i, original)) {
            log.push_back({doc, out.size(), original, replacement});
            out.insert(out.end(), replacement.begin(), replacement.end());
            i += original.size();
            if (sites) ++(*sites);
        } else {
            out.push_back(tokens[i]);
            ++i;
        }
    }
    return out;
}

std::pair<Group, Group> split_halves(const Group& base, std::size_t n_per_half,
                                     const std::string& provenance) {
    if (base.size() < 2 * n_per_half) {
        throw DataError("base corpus has " + std::to_string(base.size()) +
                        " texts, need at least " + std::to_string(2 * n_per_half));
    }
    Group h1, h2;
    h1.label = GroupLabel::G1;
    h2.label = GroupLabel::G2;
    h1.provenance = provenance + "/half1";
    h2.provenance = provenance + "/half2";
    for (std::size_t i = 0; i < n_per_half; ++i) {
        TokenSequence t = base.texts[i];
        t.source_id = i;
        h1.texts.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < n_per_half; ++i) {
        TokenSequence t = base.texts[n_per_half + i];
        t.source_id = i;
        h2.texts.push_back(std::move(t));
    }
    return {std::move(h1), std::move(h2)};
}

const std::vector<std::pair<std::string, std::string>>& pronoun_flip_map() {
    static const std::vector<std::pair<std::string, std::string>> map = {
        {"he", "she"}, {"He", "She"}, {"him", "her"},
        {"Him", "Her"}, {"his", "her"}, {"His", "Her"}};
    return map;
}

TokenSequence flip_with_log(const TokenSequence& text, std::size_t doc,
                            std::vector<Application>& log) {
    std::vector<std::string> out = text.tokens;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& [from, to] : pronoun_flip_map()) {
            if (out[i] == from) {
                log.push_back({doc, i, {from}, {to}});
                out[i] = to;
                break;
            }
        }
    }
    return TokenSequence::from_tokens(std::move(out), text.source_id);
}

void add_truth_pattern(std::map<TokenPattern, std::set<std::size_t>>& acc,
                       const std::vector<std::string>& phrase, const std::set<std::size_t>& docs) {
    auto pattern = TokenPattern::of(phrase);
    acc[pattern].insert(docs.begin(), docs.end());
}

GroundTruthSet finalize_truth(const std::map<TokenPattern, std::set<std::size_t>>& acc) {
    GroundTruthSet truth;
    for (const auto& [pattern, docs] : acc) {
        truth.application_counts[truth.patterns.size()] =
            static_cast<std::int64_t>(docs.size());
        truth.patterns.push_back(pattern);
    }
    return truth;
}

}  // namespace

// ---------------------------------------------------------------------------

BaseKind parse_base_kind(const std::string& name) {
    if (name == "story") return BaseKind::Story;
    if (name == "email") return BaseKind::Email;
    if (name == "review") return BaseKind::Review;
    throw std::invalid_argument("unknown base kind: " + name);
}

std::string to_string(Band band) {
    switch (band) {
        case Band::High: return "high";
        case Band::Medium: return "medium";
        case Band::Low: return "low";
    }
    return "?";
}

Band parse_band(const std::string& name) {
    if (name == "high") return Band::High;
    if (name == "medium") return Band::Medium;
    if (name == "low") return Band::Low;
    throw std::invalid_argument("unknown band: " + name);
}

const std::vector<std::pair<std::string, std::string>>& default_antonyms() {
    static const std::vector<std::pair<std::string, std::string>> dict = {
        {"brilliant", "dull"},        {"wonderful", "dreadful"},
        {"excellent", "terrible"},    {"delightful", "unpleasant"},
        {"captivating", "tedious"},   {"charming", "repulsive"},
        {"superb", "abysmal"},        {"graceful", "clumsy"},
        {"inspired", "uninspired"},   {"refreshing", "stale"},
        {"gripping", "boring"},       {"masterful", "amateurish"},
        {"luminous", "drab"},         {"heartfelt", "hollow"},
        {"polished", "sloppy"},       {"inventive", "derivative"},
        {"joyful", "miserable"},      {"vibrant", "lifeless"},
        {"elegant", "clunky"},        {"thrilling", "monotonous"},
        {"poignant", "numbing"},      {"memorable", "forgettable"},
        {"stunning", "hideous"},      {"crisp", "muddled"},
        {"radiant", "gloomy"},        {"satisfying", "frustrating"},
        {"seamless", "disjointed"},   {"clever", "witless"},
        {"genuine", "phony"},         {"lively", "sluggish"},
        {"enchanting", "grating"},    {"daring", "timid"},
        {"assured", "shaky"},         {"tender", "callous"},
        {"exhilarating", "draining"}, {"immersive", "alienating"},
        {"nuanced", "simplistic"},    {"witty", "humorless"},
        {"soulful", "soulless"},      {"absorbing", "dreary"},
        {"triumphant", "disastrous"}, {"riveting", "tiresome"},
        {"sparkling", "lackluster"},  {"sincere", "insincere"},
        {"splendid", "wretched"},     {"rousing", "deadening"},
        {"incisive", "toothless"},    {"magnetic", "repellent"},
        {"admirable", "shameful"},    {"rewarding", "punishing"}};
    return dict;
}

const std::vector<std::string>& emoji_tokens() {
    static const std::vector<std::string> emoji = {
        "\U0001F600", "\U0001F389", "\U0001F44D", "\U0001F605", "\U0001F64C"};
    return emoji;
}

const std::vector<ReplacementRule>& styler_rules() {
    static const std::vector<ReplacementRule> rules = [] {
        const auto toks = [](const char* s) { return tokenize_text(s); };
        std::vector<ReplacementRule> r;
        r.push_back({toks("I hope this email finds you well."),
                     {toks("Just checking in!"), toks("Wanted to drop you a note!"),
                      toks("Long time no see, hope all's good!"), toks("Quick one for you:")},
                     RuleCategory::Greeting});
        const std::vector<std::vector<std::string>> signoff_reps = {
            toks("Let me know what you think!"), toks("Catch you soon!"),
            toks("Cheers and talk soon!"), toks("Let's chat more about this later!"),
            toks("Shoot me a reply when you can.")};
        r.push_back({toks("Sincerely,"), signoff_reps, RuleCategory::Signoff});
        r.push_back({toks("Best regards,"), signoff_reps, RuleCategory::Signoff});
        const std::vector<std::vector<std::string>> salutation_reps = {
            toks("Hi"), toks("Hey"), toks("Sup"), toks("Yo"), toks("Howdy")};
        r.push_back({toks("Dear Professor"), salutation_reps, RuleCategory::Salutation});
        r.push_back({toks("Dear Dr."), salutation_reps, RuleCategory::Salutation});
        r.push_back({toks("Dear Prof."), salutation_reps, RuleCategory::Salutation});
        r.push_back({toks("would like to"), {toks("wanna")}, RuleCategory::Abbreviation});
        r.push_back({toks("have to"), {toks("gotta")}, RuleCategory::Abbreviation});
        r.push_back({toks("please"), {toks("plz")}, RuleCategory::Abbreviation});
        r.push_back({toks("are not"), {toks("ain't")}, RuleCategory::Abbreviation});
        // insertion rule last so token positions of phrase rules stay intact
        ReplacementRule emoji;
        emoji.category = RuleCategory::Emoji;
        for (const std::string& e : emoji_tokens()) emoji.replacements.push_back({e});
        r.push_back(std::move(emoji));
        return r;
    }();
    return rules;
}

Group gen_base_corpus(BaseKind kind, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    Rng rng(seed);
    std::vector<std::string> texts;
    std::string name;
    switch (kind) {
        case BaseKind::Story:
            texts = gen_story_texts(n, rng);
            name = "story";
            break;
        case BaseKind::Email:
            texts = gen_email_texts(n, rng);
            name = "email";
            break;
        case BaseKind::Review:
            texts = gen_review_texts(n, rng);
            name = "review";
            break;
    }
    return make_group(std::move(texts), GroupLabel::Base,
                      "gen_base_corpus(" + name + ", n=" + std::to_string(n) +
                          ", seed=" + std::to_string(seed) + ")");
}

Group filter_masculine(const Group& group) {
    static const std::set<std::string> masculine = {"he", "him", "his"};
    static const std::set<std::string> gendered = {"he", "she", "him", "her", "his"};
    Group out;
    out.label = group.label;
    out.provenance = group.provenance + "/masculine";
    for (const TokenSequence& text : group.texts) {
        for (const std::string& token : text.tokens) {
            std::string lower = token;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (gendered.count(lower)) {
                if (masculine.count(lower)) out.texts.push_back(text);
                break;
            }
        }
    }
    return out;
}

TokenSequence flip_pronouns(const TokenSequence& text) {
    std::vector<Application> ignored;
    return flip_with_log(text, 0, ignored);
}

BenchmarkInstance gen_benchmark1(const Group& base, std::size_t n_per_group, double bias,
                                 std::uint64_t seed) {
    if (!(bias >= 0.5 && bias <= 1.0)) throw std::invalid_argument("bias must be in [0.5, 1.0]");
    const Group filtered = filter_masculine(base);
    if (filtered.size() < 2 * n_per_group) {
        throw DataError("insufficient masculine base texts: have " +
                        std::to_string(filtered.size()) + ", need " +
                        std::to_string(2 * n_per_group));
    }
    BenchmarkInstance inst;
    const std::string prov = "benchmark1(bias=" + std::to_string(bias) + ")";
    auto [h1, h2] = split_halves(filtered, n_per_group, prov);

    Rng rng(seed);
    const auto k1 = static_cast<std::size_t>(std::llround(0.5 * static_cast<double>(n_per_group)));
    const auto k2 =
        static_cast<std::size_t>(std::llround((1.0 - bias) * static_cast<double>(n_per_group)));
    const std::vector<std::size_t> flip1 = rng.sample_indices(n_per_group, k1);
    const std::vector<std::size_t> flip2 = rng.sample_indices(n_per_group, k2);
    for (std::size_t d : flip1) h1.texts[d] = flip_with_log(h1.texts[d], d, inst.applied_g1);
    for (std::size_t d : flip2) h2.texts[d] = flip_with_log(h2.texts[d], d, inst.applied_g2);
    inst.g1 = std::move(h1);
    inst.g2 = std::move(h2);

    // ten singleton pronoun patterns; counts from the G2-side log
    std::map<TokenPattern, std::set<std::size_t>> acc;
    for (const auto& [from, to] : pronoun_flip_map()) {
        acc[TokenPattern::of({from})];
        acc[TokenPattern::of({to})];
    }
    for (const Application& app : inst.applied_g2) {
        acc[TokenPattern::of(app.original)].insert(app.doc);
        acc[TokenPattern::of(app.replacement)].insert(app.doc);
    }
    inst.truth = finalize_truth(acc);

    inst.meta.benchmark = 1;
    inst.meta.seed = seed;
    inst.meta.params = {{"n_per_group", n_per_group}, {"bias", bias}};
    return inst;
}

BenchmarkInstance gen_benchmark2(const Group& base, double p_apply, std::uint64_t seed) {
    if (!(p_apply >= 0.0 && p_apply <= 1.0)) {
        throw std::invalid_argument("p_apply must be in [0, 1]");
    }
    const std::size_t n = base.size() / 2;
    if (n < 1) throw DataError("base corpus too small to split");
    BenchmarkInstance inst;
    const std::string prov = "benchmark2(p_apply=" + std::to_string(p_apply) + ")";
    auto [h1, h2] = split_halves(base, n, prov);

    Rng rng(seed);
    const auto& rules = styler_rules();
    std::vector<std::size_t> match_counts(rules.size(), 0);
    // per-phrase sets of documents where a side actually fired
    std::map<std::vector<std::string>, std::set<std::size_t>> fired_original, fired_replacement;

    for (std::size_t d = 0; d < h2.texts.size(); ++d) {
        std::vector<std::string> tokens = h2.texts[d].tokens;
        for (std::size_t ri = 0; ri < rules.size(); ++ri) {
            const ReplacementRule& rule = rules[ri];
            if (rule.original.empty()) {
                ++match_counts[ri];  // insertion rules match every text
                if (!rng.bernoulli(p_apply)) continue;
                const auto& rep = rule.replacements[rng.uniform(rule.replacements.size())];
                const std::size_t pos = rng.uniform(tokens.size() + 1);
                inst.applied_g2.push_back({d, pos, {}, rep});
                tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos), rep.begin(),
                              rep.end());
                fired_replacement[rep].insert(d);
                continue;
            }
            if (!contains_phrase(tokens, rule.original)) continue;
            ++match_counts[ri];
            if (!rng.bernoulli(p_apply)) continue;
            const auto& rep = rule.replacements[rng.uniform(rule.replacements.size())];
            std::size_t sites = 0;
            tokens = replace_phrase(tokens, d, rule.original, rep, inst.applied_g2, &sites);
            if (sites > 0) {
                fired_original[rule.original].insert(d);
                fired_replacement[rep].insert(d);
            }
        }
        h2.texts[d] = TokenSequence::from_tokens(std::move(tokens), h2.texts[d].source_id);
    }

    if (std::find(match_counts.begin(), match_counts.end(), 0u) != match_counts.end()) {
        std::string counts = "some style rules matched no text; matches per rule:";
        for (std::size_t ri = 0; ri < rules.size(); ++ri) {
            counts += " [" + (rules[ri].original.empty() ? std::string("emoji insertion")
                                                         : join(rules[ri].original)) +
                      "]=" + std::to_string(match_counts[ri]);
        }
        inst.warnings.push_back(counts);
    }

    // truth: both sides of every applied rule, original sides only when the
    // phrase is actually present in the untouched half
    std::map<TokenPattern, std::set<std::size_t>> acc;
    for (const auto& [phrase, docs] : fired_original) {
        bool in_g1 = false;
        for (const TokenSequence& t : h1.texts) {
            if (contains_phrase(t.tokens, phrase)) {
                in_g1 = true;
                break;
            }
        }
        if (in_g1) add_truth_pattern(acc, phrase, docs);
    }
    for (const auto& [phrase, docs] : fired_replacement) add_truth_pattern(acc, phrase, docs);

    inst.g1 = std::move(h1);
    inst.g2 = std::move(h2);
    inst.truth = finalize_truth(acc);
    inst.meta.benchmark = 2;
    inst.meta.seed = seed;
    inst.meta.params = {{"n_per_group", n}, {"p_apply", p_apply}};
    return inst;
}

BenchmarkInstance gen_benchmark3(const Group& base,
                                 const std::vector<std::pair<std::string, std::string>>& antonyms,
                                 std::uint64_t seed, const Benchmark3Config& cfg) {
    if (antonyms.empty()) throw std::invalid_argument("antonym dictionary must be non-empty");
    for (const auto& [key, value] : antonyms) {
        if (tokenize_text(key).size() != 1 || tokenize_text(value).size() != 1) {
            throw std::invalid_argument("antonym entries must be single tokens: " + key + " -> " +
                                        value);
        }
    }
    const std::size_t n = base.size() / 2;
    if (n < 1) throw DataError("base corpus too small to split");
    BenchmarkInstance inst;
    auto [h1, h2] = split_halves(base, n, "benchmark3");

    std::map<std::string, std::string> dict(antonyms.begin(), antonyms.end());
    std::map<std::string, std::set<std::size_t>> fired;  // key -> docs touched
    for (std::size_t d = 0; d < h2.texts.size(); ++d) {
        std::vector<std::string> tokens = h2.texts[d].tokens;
        bool touched = false;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            const auto it = dict.find(tokens[i]);
            if (it == dict.end()) continue;
            inst.applied_g2.push_back({d, i, {it->first}, {it->second}});
            fired[it->first].insert(d);
            tokens[i] = it->second;
            touched = true;
        }
        if (touched) h2.texts[d] = TokenSequence::from_tokens(std::move(tokens),
                                                              h2.texts[d].source_id);
    }

    std::map<TokenPattern, std::set<std::size_t>> acc;
    for (const auto& [key, docs] : fired) {
        add_truth_pattern(acc, {key}, docs);
        add_truth_pattern(acc, {dict.at(key)}, docs);
    }
    inst.truth = finalize_truth(acc);
    for (std::size_t i = 0; i < inst.truth.patterns.size(); ++i) {
        const std::int64_t count = inst.truth.application_counts.at(i);
        inst.truth.bands[i] = count >= cfg.band_high  ? Band::High
                              : count >= cfg.band_medium ? Band::Medium
                                                         : Band::Low;
    }

    inst.g1 = std::move(h1);
    inst.g2 = std::move(h2);
    inst.meta.benchmark = 3;
    inst.meta.seed = seed;
    inst.meta.params = {{"n_per_group", n},
                        {"dict_size", antonyms.size()},
                        {"band_high", cfg.band_high},
                        {"band_medium", cfg.band_medium}};
    return inst;
}

std::vector<TokenSequence> revert_applications(const Group& transformed,
                                               const std::vector<Application>& log) {
    std::vector<std::vector<const Application*>> per_doc(transformed.size());
    for (const Application& app : log) {
        if (app.doc >= per_doc.size()) throw DataError("application log references unknown doc");
        per_doc[app.doc].push_back(&app);
    }
    std::vector<TokenSequence> out;
    out.reserve(transformed.size());
    for (std::size_t d = 0; d < transformed.size(); ++d) {
        std::vector<std::string> tokens = transformed.texts[d].tokens;
        // undo in reverse application order so recorded positions stay valid
        for (auto it = per_doc[d].rbegin(); it != per_doc[d].rend(); ++it) {
            const Application& app = **it;
            if (app.pos + app.replacement.size() > tokens.size()) {
                throw DataError("application log does not match document");
            }
            for (std::size_t k = 0; k < app.replacement.size(); ++k) {
                if (tokens[app.pos + k] != app.replacement[k]) {
                    throw DataError("application log does not match document");
                }
            }
            tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(app.pos),
                         tokens.begin() + static_cast<std::ptrdiff_t>(app.pos +
                                                                      app.replacement.size()));
            tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(app.pos),
                          app.original.begin(), app.original.end());
        }
        out.push_back(TokenSequence::from_tokens(std::move(tokens),
                                                 transformed.texts[d].source_id));
    }
    return out;
}

void write_truth(const GroundTruthSet& truth, const std::string& path) {
    nlohmann::json j;
    j["patterns"] = nlohmann::json::array();
    for (const TokenPattern& p : truth.patterns) j["patterns"].push_back(p.tokens);
    if (!truth.bands.empty()) {
        nlohmann::json bands = nlohmann::json::object();
        for (const auto& [idx, band] : truth.bands) bands[std::to_string(idx)] = to_string(band);
        j["bands"] = std::move(bands);
    }
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [idx, count] : truth.application_counts) {
        counts[std::to_string(idx)] = count;
    }
    j["application_counts"] = std::move(counts);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

GroundTruthSet read_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
    GroundTruthSet truth;
    if (!j.contains("patterns") || !j["patterns"].is_array()) {
        throw DataError(path + ": missing \"patterns\" array");
    }
    for (const auto& arr : j["patterns"]) {
        truth.patterns.push_back(TokenPattern::of(arr.get<std::vector<std::string>>()));
    }
    if (j.contains("bands")) {
        for (const auto& [key, value] : j["bands"].items()) {
            truth.bands[std::stoul(key)] = parse_band(value.get<std::string>());
        }
    }
    if (j.contains("application_counts")) {
        for (const auto& [key, value] : j["application_counts"].items()) {
            truth.application_counts[std::stoul(key)] = value.get<std::int64_t>();
        }
    }
    return truth;
}

void write_instance(const BenchmarkInstance& instance, const std::string& dir, bool force) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::vector<std::string> names = {"g1.jsonl", "g2.jsonl", "truth.json", "meta.json"};
    if (!force) {
        for (const std::string& name : names) {
            if (fs::exists(fs::path(dir) / name)) {
                throw DataError(dir + "/" + name + " exists; use --force to overwrite");
            }
        }
    }
    write_group(instance.g1, (fs::path(dir) / "g1.jsonl").string(), CorpusFormat::Jsonl);
    write_group(instance.g2, (fs::path(dir) / "g2.jsonl").string(), CorpusFormat::Jsonl);
    write_truth(instance.truth, (fs::path(dir) / "truth.json").string());
    nlohmann::json meta = {{"benchmark", instance.meta.benchmark},
                           {"seed", instance.meta.seed},
                           {"params", instance.meta.params},
                           {"tool_version", kToolVersion}};
    std::ofstream out((fs::path(dir) / "meta.json").string(), std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write meta.json");
    out << meta.dump(2) << '\n';
}

std::vector<std::pair<std::string, std::string>> load_antonyms_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::pair<std::string, std::string>> dict;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError(path + ": line " + std::to_string(lineno) +
                            " is not tab-separated");
        }
        dict.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    if (dict.empty()) throw DataError(path + ": empty dictionary");
    return dict;
}

}  // namespace spotlight
