"""Regenerate everything under src/detour/data.

Networks are hand-built desk-scale subsets; hop times come from station
distance at a nominal running speed plus dwell. Images are schematic maps
drawn from the same documents. Cassettes are synthetic: a scripted transport
answers each request and the pipeline records it in record mode, so replay
sees exactly what a live run would have stored.

    python3 tools/build_bundled_data.py [--skip-images] [--skip-cassettes]
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import shutil
from pathlib import Path

from detour.disruption import NO_CONSTRAINTS, compile_constraints
from detour.geo import haversine_m
from detour.llm import CassetteStore, IoMode, MapMode, PipelineMode, load_provider_configs, run_pipeline
from detour.llm.providers import response_body
from detour.network import load_network, resolve_station
from detour.router import Objective, plan
from detour.routes import Leg, Route, route_to_dict, serialize_route
from detour.scenarios import load_scenarios

DATA = Path(__file__).resolve().parents[1] / "src" / "detour" / "data"
RECORDED_AT = "2024-05-01T17:30:00+00:00"

SUBWAY_MPS, SUBWAY_DWELL_S = 8.0, 30.0
BUS_MPS, BUS_DWELL_S = 3.5, 30.0

# -- NYC subset -----------------------------------------------------------------

NYC_STATIONS = [
    ("wtc", "World Trade Center", 40.7126, -74.0099, ["WTC", "WTC Cortlandt", "Cortlandt St"]),
    ("fulton", "Fulton St", 40.7102, -74.0076, []),
    ("chambers", "Chambers St", 40.7143, -74.0086, []),
    ("bbch", "Brooklyn Bridge-City Hall", 40.7131, -74.0041, ["City Hall"]),
    ("canal", "Canal St", 40.7190, -74.0002, []),
    ("w4", "W 4 St-Wash Sq", 40.7322, -74.0005, ["West 4 St"]),
    ("14st7av", "14 St", 40.7377, -74.0002, ["14 St-7 Av"]),
    ("unionsq", "14 St-Union Sq", 40.7359, -73.9906, ["Union Square"]),
    ("penn123", "34 St-Penn Station", 40.7506, -73.9911, ["Penn Station"]),
    ("penn8av", "34 St-Penn Station (8 Av)", 40.7523, -73.9932, []),
    ("herald", "34 St-Herald Sq", 40.7498, -73.9880, ["Herald Square"]),
    ("hudson", "34 St-Hudson Yards", 40.7559, -74.0020, ["Hudson Yards"]),
    ("timessq", "Times Sq-42 St", 40.7553, -73.9870, ["Times Square", "Times Sq", "Times Square-42 St", "Times Square 42 St"]),
    ("portauth", "42 St-Port Authority Bus Terminal", 40.7573, -73.9898, ["42 St-Port Authority", "Port Authority", "42nd street-port", "42 St-8 Av"]),
    ("bryant", "42 St-Bryant Pk", 40.7540, -73.9818, ["5 Av", "Bryant Park", "5 Av-Bryant Pk"]),
    ("grandcentral", "Grand Central-42 St", 40.7519, -73.9770, ["Grand Central"]),
    ("rock", "47-50 Sts-Rockefeller Ctr", 40.7587, -73.9813, ["Rockefeller Center"]),
    ("7av53", "7 Av", 40.7628, -73.9813, ["7 Av-53 St"]),
    ("5av53", "5 Av/53 St", 40.7602, -73.9753, []),
    ("lex53", "Lexington Av/53 St", 40.7575, -73.9691, ["51 St"]),
    ("57st6av", "57 St", 40.7638, -73.9772, ["57 St-6 Av"]),
    ("57st7av", "57 St-7 Av", 40.7648, -73.9807, []),
    ("5av59", "5 Av/59 St", 40.7644, -73.9733, []),
    ("lex59", "Lexington Av/59 St", 40.7626, -73.9676, ["59 St"]),
    ("lex63", "Lexington Av/63 St", 40.7649, -73.9660, []),
    ("columbus", "59 St-Columbus Circle", 40.7681, -73.9819, ["Columbus Circle"]),
    ("72st", "72 St", 40.7784, -73.9819, ["72 St-Broadway"]),
    ("81st", "81 St-Museum of Natural History", 40.7813, -73.9720, []),
    ("96st", "96 St", 40.7939, -73.9724, ["96 St-Broadway"]),
    ("103st", "103 St", 40.7995, -73.9685, []),
    ("cathedral", "Cathedral Parkway (110 St)", 40.8040, -73.9668, ["Cathedral Parkway", "Cathedral Pkwy", "Cathedral Pkwy (110 St)", "Cathedral Parkway-110 St"]),
    ("116st", "116 St-Columbia University", 40.8078, -73.9641, ["116 St"]),
    ("110cpw", "110 St-Central Park West", 40.8003, -73.9582, ["Frederick Douglass Circle"]),
    ("125stn", "125 St-St Nicholas Av", 40.8111, -73.9523, []),
    ("110lenox", "110 St-Malcolm X Plaza", 40.7991, -73.9518, ["Central Park North (110 St)"]),
    ("125lenox", "125 St-Lenox Av", 40.8077, -73.9455, []),
    ("68st", "68 St-Hunter College", 40.7681, -73.9639, []),
    ("86lex", "86 St", 40.7796, -73.9556, ["86 St-Lexington Av"]),
    ("110lex", "110 St-Lexington Av", 40.7951, -73.9442, []),
    ("125lex", "125 St-Lexington Av", 40.8045, -73.9375, []),
    ("72st2av", "72 St-2 Av", 40.7688, -73.9582, []),
    ("86st2av", "86 St-2 Av", 40.7776, -73.9510, []),
    ("96st2av", "96 St-2 Av", 40.7842, -73.9472, []),
    ("5av110", "5 Av/110 St", 40.7964, -73.9495, ["Museum of the City of New York"]),
    ("mad86", "Madison Av/86 St", 40.7808, -73.9564, []),
    ("mad72", "Madison Av/72 St", 40.7718, -73.9663, []),
    ("b86", "Broadway/86 St", 40.7886, -73.9767, []),
    ("rooseveltisl", "Roosevelt Island", 40.7592, -73.9533, []),
    ("queensbridge", "21 St-Queensbridge", 40.7541, -73.9420, []),
    ("vernon", "Vernon Blvd-Jackson Av", 40.7427, -73.9536, []),
    ("courtsq", "Court Sq", 40.7471, -73.9456, ["Court Square"]),
    ("qbplaza", "Queensboro Plaza", 40.7500, -73.9402, []),
    ("queensplaza", "Queens Plaza", 40.7489, -73.9373, []),
    ("woodside", "61 St-Woodside", 40.7455, -73.9030, ["Woodside"]),
    ("jackson", "74 St-Broadway", 40.7468, -73.8913, ["Jackson Hts-Roosevelt Av", "Jackson Heights"]),
    ("junction", "Junction Blvd", 40.7491, -73.8697, []),
    ("mets", "Mets-Willets Point", 40.7546, -73.8456, []),
    ("flushing", "Flushing-Main St", 40.7596, -73.8300, ["Flushing Main St", "Main St-Flushing"]),
]

# (id, label, mode, stops)
NYC_LINES = [
    ("1", "1", "subway", ["wtc", "chambers", "14st7av", "penn123", "timessq", "columbus", "72st", "b86", "96st", "103st", "cathedral", "116st"]),
    ("2", "2", "subway", ["fulton", "chambers", "14st7av", "penn123", "timessq", "72st", "96st", "110lenox", "125lenox"]),
    ("3", "3", "subway", ["fulton", "chambers", "14st7av", "penn123", "timessq", "72st", "96st", "110lenox", "125lenox"]),
    ("4", "4", "subway", ["fulton", "bbch", "unionsq", "grandcentral", "lex59", "86lex", "125lex"]),
    ("5", "5", "subway", ["fulton", "bbch", "unionsq", "grandcentral", "lex59", "86lex", "125lex"]),
    ("6", "6", "subway", ["bbch", "canal", "unionsq", "grandcentral", "lex53", "lex59", "68st", "86lex", "110lex", "125lex"]),
    ("7", "7", "subway", ["hudson", "timessq", "bryant", "grandcentral", "vernon", "courtsq", "qbplaza", "woodside", "jackson", "junction", "mets", "flushing"]),
    ("7X", "7 Express", "subway", ["timessq", "bryant", "grandcentral", "qbplaza", "woodside", "jackson", "mets", "flushing"]),
    ("A", "A", "subway", ["fulton", "w4", "penn8av", "portauth", "columbus", "125stn"]),
    ("C", "C", "subway", ["fulton", "w4", "penn8av", "portauth", "columbus", "81st", "110cpw", "125stn"]),
    ("E", "E", "subway", ["wtc", "w4", "penn8av", "portauth", "7av53", "5av53", "lex53", "courtsq", "queensplaza", "jackson"]),
    ("B", "B", "subway", ["w4", "herald", "bryant", "rock", "7av53", "columbus", "81st", "110cpw", "125stn"]),
    ("D", "D", "subway", ["w4", "herald", "bryant", "rock", "7av53", "columbus", "125stn"]),
    ("F", "F", "subway", ["w4", "herald", "bryant", "rock", "57st6av", "lex63", "rooseveltisl", "queensbridge", "jackson"]),
    ("M", "M", "subway", ["w4", "herald", "bryant", "rock", "5av53", "lex53", "courtsq", "queensplaza", "jackson"]),
    ("N", "N", "subway", ["canal", "unionsq", "herald", "timessq", "57st7av", "5av59", "lex59", "qbplaza"]),
    ("Q", "Q", "subway", ["canal", "unionsq", "herald", "timessq", "57st7av", "lex63", "72st2av", "86st2av", "96st2av"]),
    ("R", "R", "subway", ["wtc", "canal", "unionsq", "herald", "timessq", "57st7av", "5av59", "lex59", "queensplaza", "jackson"]),
    ("W", "W", "subway", ["wtc", "canal", "unionsq", "herald", "timessq", "57st7av", "5av59", "lex59", "qbplaza"]),
    ("S", "S", "subway", ["timessq", "grandcentral"]),
    ("M4", "M4", "bus", ["herald", "bryant", "5av53", "5av59", "mad72", "mad86", "5av110", "110cpw", "cathedral", "116st"]),
    ("M104", "M104", "bus", ["grandcentral", "timessq", "57st7av", "columbus", "72st", "b86", "96st", "cathedral", "116st"]),
]

# docks for the bike scenario; counts are artifact data
NYC_BIKES = [
    ("dock-cathedral", 40.8036, -73.9662, 9),
    ("dock-110cpw", 40.7999, -73.9589, 4),
    ("dock-north-meadow", 40.7942, -73.9590, 0),
    ("dock-96-cpw", 40.7916, -73.9645, 6),
    ("dock-81-cpw", 40.7818, -73.9727, 3),
    ("dock-columbus", 40.7677, -73.9812, 12),
    ("dock-5av59", 40.7650, -73.9738, 7),
    ("dock-7av53", 40.7632, -73.9808, 0),
    ("dock-portauth", 40.7578, -73.9905, 5),
]

# -- Washington DC subset ----------------------------------------------------------

DC_STATIONS = [
    ("shadygrove", "Shady Grove", 39.1199, -77.1646, []),
    ("rockville", "Rockville", 39.0844, -77.1461, []),
    ("twinbrook", "Twinbrook", 39.0625, -77.1211, []),
    ("whiteflint", "North Bethesda", 39.0481, -77.1131, ["White Flint"]),
    ("grosvenor", "Grosvenor-Strathmore", 39.0294, -77.1039, []),
    ("medcenter", "Medical Center", 38.9999, -77.0969, []),
    ("bethesda", "Bethesda", 38.9841, -77.0941, []),
    ("friendship", "Friendship Heights", 38.9601, -77.0856, []),
    ("tenleytown", "Tenleytown-AU", 38.9479, -77.0795, []),
    ("vanness", "Van Ness-UDC", 38.9431, -77.0634, []),
    ("clevelandpk", "Cleveland Park", 38.9344, -77.0580, []),
    ("woodleypk", "Woodley Park", 38.9250, -77.0524, []),
    ("dupont", "Dupont Circle", 38.9096, -77.0434, []),
    ("farragutn", "Farragut North", 38.9032, -77.0397, []),
    ("metrocenter", "Metro Center", 38.8983, -77.0281, []),
    ("gallery", "Gallery Pl-Chinatown", 38.8983, -77.0219, ["Gallery Place", "Gallery Place-Chinatown"]),
    ("judiciary", "Judiciary Sq", 38.8961, -77.0166, ["Judiciary Square"]),
    ("unionstation", "Union Station", 38.8977, -77.0074, []),
    ("noma", "NoMa-Gallaudet U", 38.9070, -77.0030, []),
    ("rhodeisland", "Rhode Island Av", 38.9208, -76.9959, []),
    ("brookland", "Brookland-CUA", 38.9332, -76.9945, []),
    ("forttotten", "Fort Totten", 38.9518, -77.0022, []),
    ("lenfant", "L'Enfant Plaza", 38.8848, -77.0214, []),
    ("archives", "Archives", 38.8935, -77.0219, []),
    ("mtvernon", "Mt Vernon Sq", 38.9056, -77.0221, ["Mount Vernon Square"]),
    ("shaw", "Shaw-Howard U", 38.9128, -77.0220, []),
    ("ustreet", "U St", 38.9170, -77.0281, ["U Street"]),
    ("colheights", "Columbia Heights", 38.9285, -77.0325, []),
    ("georgiaav", "Georgia Av-Petworth", 38.9374, -77.0235, []),
    ("westhyatts", "West Hyattsville", 38.9550, -76.9695, []),
    ("pgplaza", "Hyattsville Crossing", 38.9654, -76.9557, ["Prince George's Plaza"]),
    ("collegepark", "College Park-U of Md", 38.9786, -76.9281, ["College Park"]),
    ("greenbelt", "Greenbelt", 39.0111, -76.9110, []),
    ("farragutw", "Farragut West", 38.9013, -77.0420, []),
    ("mcpherson", "McPherson Sq", 38.9013, -77.0336, []),
    ("fedtriangle", "Federal Triangle", 38.8932, -77.0281, []),
    ("smithsonian", "Smithsonian", 38.8881, -77.0280, []),
    ("capitolsouth", "Capitol South", 38.8851, -77.0052, []),
    ("easternmkt", "Eastern Market", 38.8846, -76.9960, []),
    ("potomacav", "Potomac Av", 38.8812, -76.9854, []),
    ("stadium", "Stadium-Armory", 38.8867, -76.9770, []),
    ("minnesota", "Minnesota Av", 38.8983, -76.9480, []),
    ("deanwood", "Deanwood", 38.9080, -76.9353, []),
    ("cheverly", "Cheverly", 38.9166, -76.9156, []),
    ("landover", "Landover", 38.9337, -76.8913, []),
    ("newcarrollton", "New Carrollton", 38.9480, -76.8720, []),
]

DC_LINES = [
    ("RD", "Red", "subway", ["shadygrove", "rockville", "twinbrook", "whiteflint", "grosvenor", "medcenter", "bethesda", "friendship", "tenleytown", "vanness", "clevelandpk", "woodleypk", "dupont", "farragutn", "metrocenter", "gallery", "judiciary", "unionstation", "noma", "rhodeisland", "brookland", "forttotten"]),
    ("GR", "Green", "subway", ["lenfant", "archives", "gallery", "mtvernon", "shaw", "ustreet", "colheights", "georgiaav", "forttotten", "westhyatts", "pgplaza", "collegepark", "greenbelt"]),
    ("OR", "Orange", "subway", ["farragutw", "mcpherson", "metrocenter", "fedtriangle", "smithsonian", "lenfant", "capitolsouth", "easternmkt", "potomacav", "stadium", "minnesota", "deanwood", "cheverly", "landover", "newcarrollton"]),
]

LINE_COLORS = {
    "1": "#EE352E", "2": "#EE352E", "3": "#EE352E",
    "4": "#00933C", "5": "#00933C", "6": "#00933C",
    "7": "#B933AD", "7X": "#B933AD",
    "A": "#0039A6", "C": "#0039A6", "E": "#0039A6",
    "B": "#FF6319", "D": "#FF6319", "F": "#FF6319", "M": "#FF6319",
    "N": "#FCCC0A", "Q": "#FCCC0A", "R": "#FCCC0A", "W": "#FCCC0A",
    "S": "#808183", "M4": "#1B75BB", "M104": "#1B75BB",
    "RD": "#BF0D3E", "GR": "#00B140", "OR": "#ED8B00",
}


def build_network(stations, lines, bikes=()) -> dict:
    where = {sid: (lat, lon) for sid, _, lat, lon, _ in stations}
    doc_lines = []
    for lid, label, mode, stops in lines:
        speed, dwell = (SUBWAY_MPS, SUBWAY_DWELL_S) if mode == "subway" else (BUS_MPS, BUS_DWELL_S)
        hops = [
            float(round(haversine_m(*where[a], *where[b]) / speed + dwell))
            for a, b in zip(stops, stops[1:])
        ]
        doc_lines.append({
            "id": lid, "label": label, "mode": mode, "stops": stops,
            "hop_times_s": hops, "bidirectional": True,
        })
    return {
        "stations": [
            {"id": sid, "name": name, "aliases": aliases, "lat": lat, "lon": lon}
            for sid, name, lat, lon, aliases in stations
        ],
        "lines": doc_lines,
        "bike_stations": [{"id": b, "lat": lat, "lon": lon, "bikes": n} for b, lat, lon, n in bikes],
        "walk_link_threshold_m": 1000.0,
        "walking_speed_mps": 1.25,
    }


# -- scenarios -----------------------------------------------------------------------

NYC_MAP = {"path": "../images/nyc-subway-map.png", "caption": "NYC subway map (official map, simplified)"}
BUS_MAP = {"path": "../images/manhattan-bus-map.png", "caption": "Manhattan bus map"}
DC_MAP = {"path": "../images/dc-metro-map.png", "caption": "Washington DC Metrorail map"}

WEST_SIDE_LINES = ["1", "2", "3", "A", "B", "C", "D"]

SCENARIOS = [
    {
        "id": "S1",
        "title": "North-south subway, extreme weather",
        "take_home": "To test whether LLMs can reason on general positions",
        "query": "I finished my work at WTC and headed home at Cathedral Parkway. West Manhattan is flooded and 1/2/3/A/B/C/D are not in operation so I want to take alternative paths.",
        "network": "../networks/nyc.json",
        "origin": "WTC",
        "destination": "Cathedral Parkway",
        "disruption": {"disabled_lines": WEST_SIDE_LINES},
        "maps": [NYC_MAP],
        "notes": "The flooded west side is encoded only through the named lines; no zone is added.",
    },
    {
        "id": "S2",
        "title": "Cross-river subway",
        "take_home": "To test whether LLMs can reason based on physical constraints",
        "query": "I'm currently at Cathedral Parkway and heading to Flushing-Main St. What paths should I take based on the NYC subway map? By the way, I want to avoid Times Square.",
        "network": "../networks/nyc.json",
        "origin": "Cathedral Parkway",
        "destination": "Flushing-Main St",
        "disruption": {"avoided_stations": ["Times Sq-42 St"]},
        "maps": [NYC_MAP],
        "notes": "Times Square is the Times Sq-42 St complex; passing through it on a train counts as a visit.",
    },
    {
        "id": "S3",
        "title": "Cross-town subway, emergency events prevent the regular route",
        "take_home": "To test whether LLMs can consider the impact of events on regular routes",
        "query": "I'm currently on 7 local train at Grand Central-42 St. I want to go to Cathedral Parkway. I heard that an attack happens at the intersection of 7 local train and 1/2/3 local trains at Times Square 42 St. How can I go based on NYC subway map?",
        "network": "../networks/nyc.json",
        "origin": "Grand Central-42 St",
        "destination": "Cathedral Parkway",
        "disruption": {"avoided_stations": ["Times Sq-42 St"]},
        "maps": [NYC_MAP],
        "notes": "The attacked intersection forbids the whole Times Sq-42 St station, not single platforms.",
    },
    {
        "id": "S4",
        "title": "Cross-town subway, emergency events do not prevent the regular route",
        "take_home": "To test whether LLMs can reason that the events do not prevent the regular route",
        "query": "I'm currently on 7 local train at Grand Central-42 St, heading towards Times Square. I want to go to Cathedral Parkway. I heard that an attack happens at the intersection of 7 local train and A/C/E local trains at 42 St. How can I go based on NYC subway map?",
        "network": "../networks/nyc.json",
        "origin": "Grand Central-42 St",
        "destination": "Cathedral Parkway",
        "disruption": {"avoided_stations": ["42 St-Port Authority Bus Terminal"]},
        "maps": [NYC_MAP],
        "notes": "The 7 / A/C/E intersection is the 42 St-Port Authority station; the 7 to Times Sq and the 1 uptown stay open.",
    },
    {
        "id": "S5",
        "title": "Attack area, subway",
        "take_home": "To test whether LLMs can understand and reason based on the provided images and markings",
        "query": "The area under the dark rectangular is marked as a dangerous zone and should be avoided. I'm currently at Cathedral Parkway and heading to Flushing-Main St. What paths should I take based on the NYC subway map?",
        "network": "../networks/nyc.json",
        "origin": "Cathedral Parkway",
        "destination": "Flushing-Main St",
        "disruption": {"danger_zones": [{"min_lat": 40.748, "min_lon": -74.0, "max_lat": 40.761, "max_lon": -73.965}]},
        "maps": [NYC_MAP],
        "attachments": [{"path": "../images/s5-danger-zone.png", "caption": "Subway map with the dangerous zone shaded"}],
        "notes": "The shaded rectangle in the attached image is the danger zone box; it covers midtown from 34 St to 53 St.",
    },
    {
        "id": "S6",
        "title": "Additional transportation services (subway, bus, and Citi Bikes)",
        "take_home": "To test whether LLMs can incorporate potentially unfamiliar services given as new image information",
        "query": "I'm in the black circle area marked as my location, trying to go to 42nd street-port to take bus to Jersey. I would like to use bike for sight viewing in Central Park. However, I heard that it is busy around Times Square, so I want to avoid riding bike there. Bus or subway is preferred. Provided two images are citi bike station locations, with color means the amount of bikes available.",
        "network": "../networks/nyc.json",
        "origin": "Cathedral Parkway",
        "destination": "42 St-Port Authority Bus Terminal",
        "maps": [NYC_MAP],
        "attachments": [
            {"path": "../images/s6-bikes-north.png", "caption": "Bike stations, upper Central Park (marked circle is my location)"},
            {"path": "../images/s6-bikes-south.png", "caption": "Bike stations, lower Central Park and midtown"},
        ],
        "notes": "The black circle is at Cathedral Parkway (110 St). Avoiding bike riding near Times Square cannot be expressed as a station or zone ban without also banning the destination, so the disruption is empty; bike legs are still checked against dock availability. Dock positions and counts are artifact data.",
    },
    {
        "id": "S7",
        "title": "Subway and bus",
        "take_home": "To test the difference in recommended routes between providing an additional map of bus services or not",
        "query": "I finished my work at WTC and headed home on Cathedral Parkway. West Manhattan is flooded and 1/2/3/A/B/C/D are not in operation so I want to take alternative paths. Access Manhattan Bus Map to find a path that uses bus services.",
        "network": "../networks/nyc.json",
        "origin": "WTC",
        "destination": "Cathedral Parkway",
        "disruption": {"disabled_lines": WEST_SIDE_LINES},
        "maps": [NYC_MAP, BUS_MAP],
        "notes": "Same constraints as S1; the bus map is part of the knowledge base and is dropped in without-maps mode.",
    },
    {
        "id": "S8",
        "title": "Constraints",
        "take_home": "To test the ability of LLMs to incorporate constraints aimed at optimizing quantitative metrics",
        "query": "I'm currently at Cathedral Parkway and heading to Flushing-Main St. What paths should I take based on the NYC subway map? By the way, I want to avoid 42nd street the entire Times Square area. With the constraint: Take express if possible(choose route with min stops)",
        "network": "../networks/nyc.json",
        "origin": "Cathedral Parkway",
        "destination": "Flushing-Main St",
        "objective": "min-stops",
        "disruption": {"avoided_stations": ["Times Sq-42 St", "42 St-Port Authority Bus Terminal", "42 St-Bryant Pk", "Grand Central-42 St"]},
        "maps": [NYC_MAP],
        "notes": "Every 42 St station in the subset is forbidden. The oracle minimizes stations visited.",
    },
    {
        "id": "S9",
        "title": "DC subway",
        "take_home": "To test whether the ability of LLMs is specific to NYC due to potentially richer text data",
        "query": "I'm currently at Shady Grove, and would like to go to Greenbelt. Area around Gallery Place is dangerous. How can I get there?",
        "network": "../networks/dc.json",
        "origin": "Shady Grove",
        "destination": "Greenbelt",
        "disruption": {"danger_zones": [{"min_lat": 38.895, "min_lon": -77.025, "max_lat": 38.901, "max_lon": -77.019}]},
        "maps": [DC_MAP],
        "notes": "The area around Gallery Place is a box of roughly 600 m around the station; it catches only Gallery Pl-Chinatown.",
    },
]

PROVIDERS = [
    {"name": "GPT", "api": "openai-chat", "endpoint": "https://api.openai.com/v1/chat/completions",
     "model_id": "gpt-4-turbo", "auth_token_env": "OPENAI_API_KEY"},
    {"name": "Gemini", "api": "gemini-generate", "endpoint": "https://generativelanguage.googleapis.com/v1beta",
     "model_id": "gemini-1.0-pro-vision", "auth_token_env": "GEMINI_API_KEY"},
    {"name": "Claude", "api": "anthropic-messages", "endpoint": "https://api.anthropic.com/v1/messages",
     "model_id": "claude-3-opus-20240229", "auth_token_env": "ANTHROPIC_API_KEY"},
]


# -- images ----------------------------------------------------------------------------

def render_map(net_doc: dict, path: Path, *, modes=("subway",), zone=None, bikes=False,
               focus=None, marker=None, size=(900, 1100)) -> None:
    from PIL import Image, ImageDraw

    where = {s["id"]: (s["lat"], s["lon"]) for s in net_doc["stations"]}
    names = {s["id"]: s["name"] for s in net_doc["stations"]}
    drawn = [ln for ln in net_doc["lines"] if ln["mode"] in modes]
    ids = sorted({s for ln in drawn for s in ln["stops"]})
    if focus:
        lat0, lon0, lat1, lon1 = focus
    else:
        lats = [where[s][0] for s in ids]
        lons = [where[s][1] for s in ids]
        lat0, lat1, lon0, lon1 = min(lats), max(lats), min(lons), max(lons)
    w, h = size
    pad = 60

    def xy(lat, lon):
        x = pad + (lon - lon0) / (lon1 - lon0) * (w - 2 * pad)
        y = pad + (lat1 - lat) / (lat1 - lat0) * (h - 2 * pad)
        return x, y

    img = Image.new("RGB", size, "white")
    d = ImageDraw.Draw(img)
    if zone:
        x0, y0 = xy(zone["max_lat"], zone["min_lon"])
        x1, y1 = xy(zone["min_lat"], zone["max_lon"])
        d.rectangle([x0, y0, x1, y1], fill="#3A3A3A")
    for i, ln in enumerate(drawn):
        off = (i % 5 - 2) * 3
        pts = [tuple(c + off for c in xy(*where[s])) for s in ln["stops"]]
        d.line(pts, fill=LINE_COLORS.get(ln["id"], "#000000"), width=4)
        lx, ly = pts[0]
        d.text((lx + 6, ly - 14), ln["label"], fill=LINE_COLORS.get(ln["id"], "#000000"))
    for s in ids:
        x, y = xy(*where[s])
        d.ellipse([x - 4, y - 4, x + 4, y + 4], fill="white", outline="black")
        d.text((x + 7, y - 5), names[s], fill="black")
    if bikes:
        for b in net_doc["bike_stations"]:
            x, y = xy(b["lat"], b["lon"])
            color = "#D0021B" if b["bikes"] == 0 else ("#F5A623" if b["bikes"] < 5 else "#2E8B57")
            d.rectangle([x - 6, y - 6, x + 6, y + 6], fill=color)
    if marker:
        x, y = xy(*marker)
        d.ellipse([x - 22, y - 22, x + 22, y + 22], outline="black", width=5)
        d.text((x + 26, y - 6), "my location", fill="black")
    img.save(path, format="PNG", optimize=False)


def build_images(nyc: dict, dc: dict) -> None:
    out = DATA / "images"
    out.mkdir(parents=True, exist_ok=True)
    render_map(nyc, out / "nyc-subway-map.png")
    render_map(nyc, out / "manhattan-bus-map.png", modes=("bus",))
    render_map(dc, out / "dc-metro-map.png")
    render_map(nyc, out / "s5-danger-zone.png", zone=SCENARIOS[4]["disruption"]["danger_zones"][0])
    where = {s["id"]: (s["lat"], s["lon"]) for s in nyc["stations"]}
    render_map(nyc, out / "s6-bikes-north.png", bikes=True, focus=(40.776, -73.990, 40.810, -73.940),
               marker=where["cathedral"], size=(800, 800))
    render_map(nyc, out / "s6-bikes-south.png", bikes=True, focus=(40.752, -74.000, 40.784, -73.955),
               size=(800, 800))


# -- minimal GTFS feed -------------------------------------------------------------------

def write_table(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def build_gtfs() -> None:
    feed = DATA / "gtfs" / "minimal"
    feed.mkdir(parents=True, exist_ok=True)
    write_table(feed / "stops.txt", ["stop_id", "stop_name", "stop_lat", "stop_lon", "location_type", "parent_station"], [
        ["HBR", "Harbor", "40.7000", "-74.0100", "1", ""],
        ["HBR-N", "Harbor Northbound", "40.7001", "-74.0101", "0", "HBR"],
        ["HBR-S", "Harbor Southbound", "40.6999", "-74.0099", "0", "HBR"],
        ["MIL", "Mill St", "40.7080", "-74.0060", "0", ""],
        ["OAK1", "Oak Av", "40.7150", "-74.0020", "0", ""],
        ["OAK2", "Oak Av", "40.7160", "-73.9900", "0", ""],
        ["DEP", "Depot", "40.7240", "-73.9950", "0", ""],
    ])
    write_table(feed / "routes.txt", ["route_id", "route_short_name", "route_long_name", "route_type"], [
        ["T10", "10", "Harbor - Depot", "1"],
        ["B2", "", "Crosstown Bus", "3"],
    ])
    write_table(feed / "trips.txt", ["route_id", "service_id", "trip_id"], [
        ["T10", "wk", "t10-a"],
        ["T10", "wk", "t10-b"],
        ["T10", "wk", "t10-c"],
        ["T10", "wk", "t10-r"],
        ["B2", "wk", "b2-a"],
    ])
    st = []

    def trip(tid, calls):
        for seq, (stop, arr, dep) in enumerate(calls, start=1):
            st.append([tid, arr, dep, stop, str(seq)])

    trip("t10-a", [("HBR-N", "08:00:00", "08:00:30"), ("MIL", "08:02:30", "08:03:00"),
                   ("OAK1", "08:05:00", "08:05:30"), ("DEP", "08:08:30", "08:09:00")])
    trip("t10-b", [("HBR-N", "08:10:00", "08:10:30"), ("MIL", "08:12:40", "08:13:00"),
                   ("OAK1", "08:15:00", "08:15:30"), ("DEP", "08:18:10", "08:18:30")])
    trip("t10-c", [("HBR-N", "24:50:00", "24:50:30"), ("MIL", "24:52:20", "24:53:00"),
                   ("OAK1", "24:55:10", "24:55:30"), ("DEP", "24:58:30", "24:59:00")])
    trip("t10-r", [("DEP", "09:00:00", "09:00:30"), ("OAK1", "09:03:30", "09:04:00"),
                   ("MIL", "09:06:00", "09:06:30"), ("HBR-S", "09:08:30", "09:09:00")])
    trip("b2-a", [("MIL", "10:00:00", "10:00:00"), ("OAK1", "", ""),
                  ("OAK2", "10:09:00", "10:09:30"), ("DEP", "10:14:00", "10:14:00")])
    write_table(feed / "stop_times.txt", ["trip_id", "arrival_time", "departure_time", "stop_id", "stop_sequence"], st)


# -- synthetic transcripts ---------------------------------------------------------------

def _leg_sentence(leg: Leg) -> str:
    if leg.mode == "walk":
        return f"Walk from {leg.from_name} to {leg.to_name}."
    if leg.mode == "bike":
        return f"Pick up a bike near {leg.from_name} and ride to {leg.to_name}, then dock it."
    noun = "train" if leg.mode == "subway" else "bus"
    return f"Board the {leg.line} {noun} at {leg.from_name} and ride to {leg.to_name}."


def plan_prose(route: Route, opener: str) -> str:
    if not route.legs:
        return opener + "\n\nYou are already at your destination."
    steps = [f"{i}. {_leg_sentence(leg)}" for i, leg in enumerate(route.legs, start=1)]
    return opener + "\n\n" + "\n".join(steps)


OPENERS = {
    "GPT": "Here is a route that keeps you away from the affected stations:",
    "Gemini": "Based on the subway map, you can take the following route:",
    "Claude": "I checked the attached maps. The safest option with few stops is:",
}


def wrap(json_text: str) -> str:
    return f"Sure! Here is the route in the requested format:\n\n```json\n{json_text}\n```\n\nHave a safe trip."


def scripted_routes(scenario, provider: str, maps: MapMode) -> tuple[Route, str | None]:
    """The route this provider 'answers' with, plus an optional summary override."""
    net = scenario.network()
    origin = resolve_station(net, scenario.origin_name)
    dest = resolve_station(net, scenario.dest_name)
    constraints = compile_constraints(net, scenario.disruption)

    if provider == "GPT":
        if scenario.id == "S6":
            route = Route((
                Leg("bike", None, "Cathedral Parkway (110 St)", "59 St-Columbus Circle"),
                Leg("subway", "A", "59 St-Columbus Circle", "42 St-Port Authority Bus Terminal"),
            ))
            return route, None
        blind = maps is MapMode.WITHOUT_MAPS and scenario.id in ("S2", "S5", "S8")
        route = plan(net, NO_CONSTRAINTS if blind else constraints, origin, dest, scenario.objective).route
        return route, None
    if provider == "Gemini":
        if scenario.id == "S9":
            return Route((Leg("subway", "Red", "Shady Grove", "Greenbelt"),)), None
        route = plan(net, NO_CONSTRAINTS, origin, dest, Objective.MIN_TIME).route
        if scenario.id == "S1":
            # an unsupported mode term in the summary
            doc = route_to_dict(route)
            doc["legs"][0]["mode"] = "metro"
            return route, json.dumps(doc, separators=(",", ":"))
        return route, None
    # Claude
    blind = maps is MapMode.WITHOUT_MAPS and scenario.id == "S3"
    route = plan(net, NO_CONSTRAINTS if blind else constraints, origin, dest, Objective.MIN_STOPS).route
    return route, None


SINGLE_STAGE_CLEAN = {"GPT": {"S4", "S7", "S9"}, "Gemini": set(), "Claude": {"S9"}}


class ScriptedTransport:
    """Answers planner, summary and single-stage calls from a fixed script."""

    def __init__(self, api: str, replies: list[str]):
        self.api = api
        self.replies = list(replies)

    def post(self, url, headers, payload):
        return 200, response_body(self.api, self.replies.pop(0))


def build_cassettes() -> None:
    cassettes = DATA / "cassettes"
    if cassettes.exists():
        shutil.rmtree(cassettes)
    store = CassetteStore(cassettes)
    configs = load_provider_configs(DATA / "providers.json")
    for cfg in configs:
        os.environ.setdefault(cfg.auth_token_env, "offline-fixture")
    now = lambda: RECORDED_AT  # noqa: E731
    expected = []
    for scenario in load_scenarios(DATA / "scenarios"):
        for cfg in configs:
            for maps in MapMode:
                route, override = scripted_routes(scenario, cfg.name, maps)
                summary = override or serialize_route(route)
                if cfg.name == "GPT" and scenario.id == "S4":
                    summary = wrap(summary)
                prose = plan_prose(route, OPENERS[cfg.name])
                if override:
                    prose = prose.replace(" train ", " metro ")
                two = ScriptedTransport(cfg.api, [prose, summary])
                run_pipeline(scenario, cfg, PipelineMode.TWO_STAGE, maps, store, IoMode.RECORD,
                             transport=two, now=now)
                expected.append((scenario, cfg, PipelineMode.TWO_STAGE, maps, summary))
                single_text = serialize_route(route)
                if scenario.id not in SINGLE_STAGE_CLEAN[cfg.name]:
                    single_text = prose + "\n\n" + wrap(single_text)
                one = ScriptedTransport(cfg.api, [single_text])
                run_pipeline(scenario, cfg, PipelineMode.SINGLE_STAGE, maps, store, IoMode.RECORD,
                             transport=one, now=now)
                expected.append((scenario, cfg, PipelineMode.SINGLE_STAGE, maps, single_text))
    # identical requests share a transcript, so a script that answers them
    # differently would be silently overwritten; replay every cell to be sure
    for scenario, cfg, mode, maps, text in expected:
        got = run_pipeline(scenario, cfg, mode, maps, store, IoMode.REPLAY)
        final = got.summary_text if mode is PipelineMode.TWO_STAGE else got.plan_text
        if final != text:
            raise SystemExit(f"transcript collision: {scenario.id} {cfg.name} {mode.value} {maps.value}")
    print(f"cassettes: {len(store.keys())} transcripts")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--skip-images", action="store_true")
    ap.add_argument("--skip-cassettes", action="store_true")
    args = ap.parse_args()

    nyc = build_network(NYC_STATIONS, NYC_LINES, NYC_BIKES)
    dc = build_network(DC_STATIONS, DC_LINES)
    (DATA / "networks").mkdir(parents=True, exist_ok=True)
    for name, doc in (("nyc", nyc), ("dc", dc)):
        path = DATA / "networks" / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        load_network(path)  # validate
    if not args.skip_images:
        build_images(nyc, dc)
    (DATA / "scenarios").mkdir(parents=True, exist_ok=True)
    for sc in SCENARIOS:
        (DATA / "scenarios" / f"{sc['id'].lower()}.json").write_text(
            json.dumps(sc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    (DATA / "providers.json").write_text(json.dumps(PROVIDERS, indent=2) + "\n", encoding="utf-8")
    build_gtfs()
    if not args.skip_cassettes:
        build_cassettes()


if __name__ == "__main__":
    main()
