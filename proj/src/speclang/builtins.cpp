#include "iterplan/spec.hpp"

namespace iterplan::spec {

namespace {

// Shared by every task: take off before the first iterator query, land at will.
constexpr const char* flight_process =
    "process FLIGHT = states 2 ; init 0 ; 0 -takeoff-> 1 ; 1 -has.next?-> 1 ; 1 -go.next-> 1 ; 1 -land-> 0\n";

std::string fire_patrol()
{
    return std::string(R"(# Patrol P, photograph fires at patrolled locations.
controlled   has.next? remove.next reset is.next.inP? go.next fire? take.photo takeoff land
uncontrolled y.next n.next yes.next.inP no.next.inP arrived yes.fire no.fire

process ITERATOR = template iterator
process PATROL_SENSOR = template binary_sensor(is.next.inP?, yes.next.inP, no.next.inP)
process FIRE_SENSOR = template binary_sensor(fire?, yes.fire, no.fire)
process NEXT_WINDOW = template next_query_window(is.next.inP?)
process CURRENT_WINDOW = template current_query_window(fire?, take.photo)
process GO = template capability_pair(go.next, arrived, take.photo)
process GO_GUARD = template go_guard
)") + flight_process +
           R"(
fluent MustPatrol = <yes.next.inP, has.next?>
fluent PatrolAnswered = <{no.next.inP, yes.next.inP}, has.next?>
fluent Arrived = <arrived, has.next?>
fluent FireDetected = <yes.fire, has.next?>
fluent PhotoTaken = <take.photo, has.next?>
fluent FireAnswered = <{yes.fire, no.fire}, has.next?>

define VisitCondition = PatrolAnswered and (MustPatrol iff Arrived)
define ArrivedCondition = FireAnswered and (FireDetected iff PhotoTaken)

goal liveness []<> has.next?
goal safety always (y.next => not remove.next wuntil VisitCondition)
goal safety always (arrived => not remove.next wuntil ArrivedCondition)

plant ITERATOR PATROL_SENSOR FIRE_SENSOR NEXT_WINDOW CURRENT_WINDOW GO GO_GUARD FLIGHT
)";
}

std::string find_nemo()
{
    return std::string(R"(# Search regions of interest; while the target is present at a
# location, keep revisiting and photographing it.
controlled   has.next? remove.next reset is.next.roi? go.next nemo? take.photo takeoff land
uncontrolled y.next n.next yes.next.roi no.next.roi arrived yes.nemo no.nemo

process ITERATOR = template iterator
process ROI_SENSOR = template binary_sensor(is.next.roi?, yes.next.roi, no.next.roi)
process NEMO_SENSOR = template binary_sensor(nemo?, yes.nemo, no.nemo)
process NEXT_WINDOW = template next_query_window(is.next.roi?)
process GO = template capability_pair(go.next, arrived, take.photo)
# go.next may repeat while the location is current
process GO_GUARD = states 3 ; init 0 ; 0 -y.next-> 1 ; 1 -go.next-> 2 ; 1 -remove.next-> 0 ; 2 -go.next-> 2 ; 2 -remove.next-> 0
# one nemo? and at most one photo per arrival
process NEMO_WINDOW = states 4 ; init 0 ; 0 -has.next?-> 0 ; 0 -arrived-> 1 ; 1 -arrived-> 1 ; 1 -nemo?-> 2 ; 2 -take.photo-> 3 ; 2 -arrived-> 1 ; 3 -arrived-> 1 ; 1 -has.next?-> 0 ; 2 -has.next?-> 0 ; 3 -has.next?-> 0
)") + flight_process +
           R"(
fluent MustSearch = <yes.next.roi, has.next?>
fluent RoiAnswered = <{no.next.roi, yes.next.roi}, has.next?>
fluent Arrived = <arrived, has.next?>
fluent NemoAnswered = <{yes.nemo, no.nemo}, {has.next?, go.next}>
fluent NemoFound = <yes.nemo, {has.next?, go.next}>
fluent PhotoTaken = <take.photo, {has.next?, go.next}>
fluent NemoPresent = <yes.nemo, no.nemo>

define VisitCondition = RoiAnswered and (MustSearch iff Arrived)
define ArrivedCondition = NemoAnswered and (NemoFound iff PhotoTaken)

assume liveness []<> not NemoPresent

goal liveness []<> has.next?
goal safety always (y.next => not remove.next wuntil VisitCondition)
goal safety always (arrived => not (remove.next or go.next) wuntil ArrivedCondition)
# while the target is present, only revisiting the current location is allowed
goal safety always (NemoPresent => not (is.next.roi? or has.next? or remove.next or land))

plant ITERATOR ROI_SENSOR NEMO_SENSOR NEXT_WINDOW GO GO_GUARD NEMO_WINDOW FLIGHT
)";
}

std::string search_and_map()
{
    return std::string(R"(# Visit every location looking for a target. After a sighting, only
# visit unvisited locations adjacent to sightings; land after a pass
# over the iterator without new sightings.
controlled   has.next? remove.next reset adjacent.next? go.next target? take.photo takeoff land
uncontrolled y.next n.next y.adjacent.next n.adjacent.next arrived yes.target no.target

process ITERATOR = template iterator
process ADJ_SENSOR = template binary_sensor(adjacent.next?, y.adjacent.next, n.adjacent.next)
process TARGET_SENSOR = template binary_sensor(target?, yes.target, no.target)
process NEXT_WINDOW = template next_query_window(adjacent.next?)
process CURRENT_WINDOW = template current_query_window(target?, take.photo)
process GO = template capability_pair(go.next, arrived, take.photo)
process GO_GUARD = template go_guard
)") + flight_process +
           R"(
fluent Arrived = <arrived, has.next?>
fluent TargetAnswered = <{yes.target, no.target}, has.next?>
fluent TargetSeen = <yes.target, has.next?>
fluent PhotoTaken = <take.photo, has.next?>
fluent AdjAnswered = <{y.adjacent.next, n.adjacent.next}, has.next?>
fluent MustMap = <y.adjacent.next, has.next?>
fluent Exhausted = <n.next, reset>
fluent NewSighting = <yes.target, reset>
fluent Mapping = <yes.target, land>

define SearchDone = Arrived and TargetAnswered
define MapDone = AdjAnswered and (MustMap iff Arrived) and (Arrived => TargetAnswered)

goal liveness []<> has.next?
goal safety always (y.next and not Mapping => not remove.next wuntil SearchDone)
goal safety always (y.next and Mapping => not remove.next wuntil MapDone)
goal safety always (arrived => not remove.next wuntil TargetAnswered and (TargetSeen iff PhotoTaken))
goal safety always (land => Exhausted and not NewSighting)
goal safety always (n.next and not NewSighting => not reset wuntil land)

plant ITERATOR ADJ_SENSOR TARGET_SENSOR NEXT_WINDOW CURRENT_WINDOW GO GO_GUARD FLIGHT
)";
}

std::string ordered_patrol(int n)
{
    auto loc = [](int k) { return std::to_string(k); };
    std::string controlled = "controlled   has.next? remove.next reset go.next takeoff land";
    std::string uncontrolled = "uncontrolled y.next n.next arrived";
    std::string queries, photos, yes_all, answers_all, photo_all;
    for (int k = 1; k <= n; ++k) {
        controlled += " is.next.loc" + loc(k) + "? photo.loc" + loc(k);
        uncontrolled += " yes.next.loc" + loc(k) + " no.next.loc" + loc(k);
        const char* sep = k > 1 ? ", " : "";
        queries += sep + ("is.next.loc" + loc(k) + "?");
        photos += sep + ("photo.loc" + loc(k));
        yes_all += sep + ("yes.next.loc" + loc(k));
        answers_all += sep + ("yes.next.loc" + loc(k) + ", no.next.loc" + loc(k));
    }
    photo_all = photos;

    std::string text = "# Photograph " + std::to_string(n) + " locations, always in the same cyclic order.\n";
    text += controlled + "\n" + uncontrolled + "\n\n";
    text += "process ITERATOR = template iterator\n";
    std::string plant = "plant ITERATOR";
    for (int k = 1; k <= n; ++k) {
        text += "process SENSOR" + loc(k) + " = template binary_sensor(is.next.loc" + loc(k) + "?, yes.next.loc" +
                loc(k) + ", no.next.loc" + loc(k) + ")\n";
        plant += " SENSOR" + loc(k);
    }
    text += "process NEXT_WINDOW = template next_query_window(" + queries + ")\n";
    text += "process CURRENT_WINDOW = template current_query_window(" + photos + ")\n";
    text += "process GO = template capability_pair(go.next, arrived)\n";
    text += "process GO_GUARD = template go_guard\n";
    text += flight_process;
    plant += " NEXT_WINDOW CURRENT_WINDOW GO GO_GUARD FLIGHT\n";

    text += "\nfluent Must = <{" + yes_all + "}, has.next?>\n";
    text += "fluent Answered = <{" + answers_all + "}, has.next?>\n";
    text += "fluent Arrived = <arrived, has.next?>\n";
    text += "fluent PhotoDone = <{" + photo_all + "}, has.next?>\n";
    for (int k = 1; k <= n; ++k) {
        text += "fluent Must" + loc(k) + " = <yes.next.loc" + loc(k) + ", has.next?>\n";
        std::string others;
        for (int j = 1; j <= n; ++j) {
            if (j != k)
                others += (others.empty() ? "" : ", ") + ("photo.loc" + loc(j));
        }
        text += "fluent Last" + loc(k) + " = <photo.loc" + loc(k) + ", {" + others + "}> initially " +
                (k == n ? "true" : "false") + "\n";
    }

    text += "\ngoal liveness []<> has.next?\n";
    text += "goal safety always (y.next => not remove.next wuntil Answered and (Must iff Arrived))\n";
    text += "goal safety always (arrived => not remove.next wuntil PhotoDone)\n";
    for (int k = 1; k <= n; ++k) {
        int prev = k == 1 ? n : k - 1;
        text += "goal safety always (is.next.loc" + loc(k) + "? => Last" + loc(prev) + ")\n";
        text += "goal safety always (photo.loc" + loc(k) + " => Must" + loc(k) + ")\n";
    }
    text += "\n" + plant;
    return text;
}

std::string cover()
{
    return std::string(R"(# Visit every location of the cover region C once per pass.
controlled   has.next? remove.next reset is.next.inC? go.next takeoff land
uncontrolled y.next n.next yes.next.inC no.next.inC arrived

process ITERATOR = template iterator
process COVER_SENSOR = template binary_sensor(is.next.inC?, yes.next.inC, no.next.inC)
process NEXT_WINDOW = template next_query_window(is.next.inC?)
process GO = template capability_pair(go.next, arrived)
process GO_GUARD = template go_guard
)") + flight_process +
           R"(
fluent MustCover = <yes.next.inC, has.next?>
fluent CoverAnswered = <{no.next.inC, yes.next.inC}, has.next?>
fluent Arrived = <arrived, has.next?>

goal liveness []<> has.next?
goal safety always (y.next => not remove.next wuntil CoverAnswered and (MustCover iff Arrived))

plant ITERATOR COVER_SENSOR NEXT_WINDOW GO GO_GUARD FLIGHT
)";
}

} // namespace

const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> n{"cover", "find_nemo", "fire_patrol", "ordered_patrol", "search_and_map"};
    return n;
}

std::string builtin_text(const std::string& name, int arity, int max_arity)
{
    if (name == "fire_patrol")
        return fire_patrol();
    if (name == "find_nemo")
        return find_nemo();
    if (name == "search_and_map")
        return search_and_map();
    if (name == "cover")
        return cover();
    if (name == "ordered_patrol") {
        if (arity < 1 || arity > max_arity)
            throw ValidationError("ordered_patrol arity " + std::to_string(arity) + " outside 1.." +
                                  std::to_string(max_arity));
        return ordered_patrol(arity);
    }
    throw ValidationError("unknown builtin specification '" + name + "'");
}

SpecDocument builtin_spec(const std::string& name, int arity, int max_arity)
{
    return parse(builtin_text(name, arity, max_arity));
}

std::map<std::string, SpecDocument> builtin_specs()
{
    std::map<std::string, SpecDocument> out;
    for (const auto& n : builtin_names())
        out.emplace(n, builtin_spec(n));
    return out;
}

} // namespace iterplan::spec
