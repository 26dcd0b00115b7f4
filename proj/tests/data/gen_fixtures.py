#!/usr/bin/env python3
"""Regenerates the committed test fixtures in this directory."""
import json, re, os

OUT = os.path.dirname(os.path.abspath(__file__))

def norm_ok(u):
    assert re.fullmatch(r"[a-z0-9 ]+", u) and "  " not in u and u == u.strip(), u

WIKI = "https://en.wikipedia.org/wiki/"

SITH = "Star Wars: Episode III - Revenge of the Sith"
ENTITIES = [
    ("sith-movie", SITH, ["Movie", "Thing"], 795.59, WIKI + "Star_Wars_Episode_III"),
    ("sith-bookseries", SITH, ["BookSeries", "Thing"], 138.05, None),
    ("sith-videogame", SITH, ["VideoGame", "Thing"], 240.0, None),
    ("sith-book", SITH, ["Book", "Thing"], 98.0, None),
    ("sith-album", SITH, ["MusicAlbum", "Thing"], 71.0, None),
    ("starwars-series", "Star Wars", ["MovieSeries", "Thing"], 500.0, WIKI + "Star_Wars"),
    ("moon-knight", "Moon Knight", ["Thing"], 320.0, WIKI + "Moon_Knight"),
    ("werewolf-by-night", "Werewolf by Night", ["Thing"], 95.0, WIKI + "Werewolf_by_Night"),
    ("marvel-comics", "Marvel Comics", ["Corporation", "Organization", "Thing"], 410.0, WIKI + "Marvel_Comics"),
    ("alien-covenant", "Alien: Covenant", ["Movie", "Thing"], 610.0, WIKI + "Alien_Covenant"),
    ("lakers", "Los Angeles Lakers", ["SportsTeam", "Organization", "Thing"], 530.0, WIKI + "Los_Angeles_Lakers"),
    ("los-angeles", "Los Angeles", ["City", "Place", "Thing"], 880.0, WIKI + "Los_Angeles"),
    ("california", "California", ["State", "Place", "Thing"], 820.0, WIKI + "California"),
    ("united-states", "United States", ["Country", "Place", "Thing"], 900.0, WIKI + "United_States"),
    ("einstein", "Albert Einstein", ["Person", "Thing"], 760.0, WIKI + "Albert_Einstein"),
    ("hunger-games", "The Hunger Games", ["BookSeries", "MovieSeries", "Thing"], 450.0, WIKI + "The_Hunger_Games"),
    ("mockingjay-movie", "Mockingjay", ["Movie", "Thing"], 380.0, None),
    ("mockingjay-book", "Mockingjay", ["Book", "Thing"], 210.0, WIKI + "Mockingjay"),
    ("lotr-series", "The Lord of the Rings", ["MovieSeries", "Thing"], 640.0, WIKI + "The_Lord_of_the_Rings_(film_series)"),
    ("lotr-books", "The Lord of the Rings", ["BookSeries", "Thing"], 470.0, WIKI + "The_Lord_of_the_Rings"),
    ("black-mountain", "Black Mountain", ["TouristAttraction", "Mountain", "Place", "Thing"], 150.0, None),
    ("gordon-ramsay", "Gordon Ramsay", ["Person", "Thing"], 340.0, WIKI + "Gordon_Ramsay"),
    ("halo-game", "Halo: Combat Evolved", ["VideoGame", "Thing"], 290.0, WIKI + "Halo_Combat_Evolved"),
    ("halo-series", "Halo", ["VideoGameSeries", "VideoGame", "Thing"], 350.0, WIKI + "Halo_(franchise)"),
    ("it-movie", "It", ["Movie", "Thing"], 580.0, WIKI + "It_(2017_film)"),
    ("x-man", "X-Man", ["Thing"], 130.0, None),
    ("sacramento-airport", "Sacramento International Airport", ["Airport", "Place", "Thing"], 180.0, None),
    ("san-jose", "San Jose", ["City", "Place", "Thing"], 330.0, WIKI + "San_Jose,_California"),
    ("yosemite", "Yosemite National Park", ["Park", "Place", "TouristAttraction", "Thing"], 420.0, WIKI + "Yosemite_National_Park"),
    ("beatles", "The Beatles", ["MusicGroup", "Organization", "Thing"], 700.0, WIKI + "The_Beatles"),
    ("bohemian-rhapsody", "Bohemian Rhapsody", ["MusicRecording", "Thing"], 260.0, WIKI + "Bohemian_Rhapsody"),
    ("ucsd", "University of California, San Diego", ["EducationalOrganization", "CollegeOrUniversity", "Organization", "Thing"], 310.0, None),
    ("microsoft", "Microsoft", ["Corporation", "Organization", "Thing"], 870.0, WIKI + "Microsoft"),
    ("moby-dick", "Moby-Dick", ["Book", "Thing"], 300.0, WIKI + "Moby-Dick"),
    ("yellowstone", "Yellowstone National Park", ["Park", "Place", "TouristAttraction", "Thing"], 390.0, None),
    ("taylor-swift", "Taylor Swift", ["Person", "Thing"], 850.0, WIKI + "Taylor_Swift"),
    ("warriors", "Golden State Warriors", ["SportsTeam", "Organization", "Thing"], 490.0, None),
    ("harry-potter", "Harry Potter", ["BookSeries", "MovieSeries", "Thing"], 680.0, WIKI + "Harry_Potter"),
    ("stranger-things", "Stranger Things", ["TVSeries", "Thing"], 560.0, None),
    ("minecraft", "Minecraft", ["VideoGame", "VideoGameSeries", "Thing"], 660.0, WIKI + "Minecraft"),
]

def ent_line(e):
    i, name, types, score, url = e
    rec = {"id": i, "name": name, "types": types, "score": score,
           "description": name}
    if url:
        rec["url"] = url
        rec["detailed_description"] = name + " is a knowledge-graph entity used in the test fixtures."
    return json.dumps(rec)

def write_entities(path, ids):
    by_id = {e[0]: e for e in ENTITIES}
    with open(path, "w") as f:
        for i in ids:
            f.write(ent_line(by_id[i]) + "\n")

# 1. The six-entity fixture for the worked example.
write_entities(f"{OUT}/sith_snapshot.jsonl",
               ["sith-movie", "sith-bookseries", "sith-videogame", "sith-book",
                "sith-album", "starwars-series"])

# 2. The broad fixture snapshot.
write_entities(f"{OUT}/fixture_snapshot.jsonl", [e[0] for e in ENTITIES])

# 3. Clean snapshot for the perfect-metrics corpus.
write_entities(f"{OUT}/clean_snapshot.jsonl",
               ["alien-covenant", "black-mountain", "x-man", "beatles", "moon-knight"])

def A(surface, types, canonical):
    return {"surface": surface, "types": types, "canonical": canonical}

FIG3_PARSE = ("(S (NP (PRP i)) (VP (VBP think) (SBAR (S (NP (PRP$ my) (JJ favorite) "
              "(NNP star) (NNPS wars)) (VP (VBZ is) (NP (NP (NN revenge)) "
              "(PP (IN of) (NP (DT the) (NN sith)))))))))")
LAKERS_PARSE = "(S (NP (DT the) (NNPS lakers)) (VP (VBZ play) (ADVP (RB right) (RB now))))"

SITH_TYPES = ["Movie", "Thing"]
CORPUS = [
    # --- worked examples and variants
    {"utterance": "i think my favorite star wars movie is revenge of the sith",
     "annotations": [A("revenge of the sith", SITH_TYPES, SITH),
                     A("star wars", ["MovieSeries", "Thing"], "Star Wars")]},
    {"utterance": "my favorite star wars movie is probably revenge of the sith",
     "annotations": [A("revenge of the sith", SITH_TYPES, SITH),
                     A("star wars", ["MovieSeries", "Thing"], "Star Wars")]},
    {"utterance": "the lord of the rings was my childhood",
     "annotations": [A("lord of the rings", ["MovieSeries", "Thing"], "The Lord of the Rings")]},
    {"utterance": "i want to visit black mountain",
     "annotations": [A("black mountain", ["TouristAttraction", "Mountain", "Place", "Thing"], "Black Mountain")]},
    {"utterance": "have you seen the new star wars movie",
     "annotations": [A("star wars", ["MovieSeries", "Thing"], "Star Wars")]},
    {"utterance": "i saw alien covenant the other day",
     "annotations": [A("alien covenant", ["Movie", "Thing"], "Alien: Covenant")]},
    {"utterance": "i thought alien covenant was scary and action packed",
     "annotations": [A("alien covenant", ["Movie", "Thing"], "Alien: Covenant")]},
    # --- moon knight conversation
    {"utterance": "lets talk about comic books who is your favorite character",
     "annotations": [], "conversation_id": "mk", "turn": 0},
    {"utterance": "i like moon knight because he can see the future sometimes",
     "annotations": [A("moon knight", ["Thing"], "Moon Knight")],
     "conversation_id": "mk", "turn": 1},
    {"utterance": "i guess that is a cool power when did he first appear",
     "annotations": [], "conversation_id": "mk", "turn": 2},
    {"utterance": "i think marvel comics debuted moon knight in werewolf by night number 32",
     "annotations": [A("marvel comics", ["Corporation", "Organization", "Thing"], "Marvel Comics"),
                     A("moon knight", ["Thing"], "Moon Knight"),
                     A("werewolf by night", ["Thing"], "Werewolf by Night")],
     "conversation_id": "mk", "turn": 3},
    # --- context and expectations
    {"utterance": "you know i kind of like scary space movies", "annotations": []},
    {"utterance": "have you seen it",
     "annotations": [A("it", ["Movie", "Thing"], "It")]},
    {"utterance": "i m watching the lakers play right now",
     "annotations": [A("lakers", ["SportsTeam", "Organization", "Thing"], "Los Angeles Lakers")]},
    {"utterance": "i hate los angeles even though i live in california",
     "annotations": [A("los angeles", ["City", "Place", "Thing"], "Los Angeles"),
                     A("california", ["State", "Place", "Thing"], "California")]},
    {"utterance": "california is the best state in the united states",
     "annotations": [A("california", ["State", "Place", "Thing"], "California"),
                     A("united states", ["Country", "Place", "Thing"], "United States")]},
    {"utterance": "albert einstein is very smart he is my favorite scientist",
     "annotations": [A("albert einstein", ["Person", "Thing"], "Albert Einstein")]},
    {"utterance": "i wonder if he would have liked reading the hunger games mockingjay",
     "annotations": [A("hunger games", ["BookSeries", "MovieSeries", "Thing"], "The Hunger Games"),
                     A("mockingjay", ["Book", "Thing"], "Mockingjay")]},
    {"utterance": "mockingjay was a pretty good movie",
     "annotations": [A("mockingjay", ["Movie", "Thing"], "Mockingjay")]},
    # --- documented system limitations kept as-is in the gold
    {"utterance": "halo has been dead for a while now",
     "annotations": [A("halo", ["VideoGame", "Thing"], "Halo: Combat Evolved")]},
    {"utterance": "lets play halo 2 tonight",
     "annotations": [A("halo", ["VideoGameSeries", "VideoGame", "Thing"], "Halo")]},
    {"utterance": "x man is my favorite comic hero",
     "annotations": [A("x man", ["Thing"], "X-Man")]},
    {"utterance": "i love gordon ramsay",
     "annotations": [A("gordon ramsay", ["Person", "Thing"], "Gordon Ramsay")]},
    {"utterance": "ucsd is number 23",
     "annotations": [A("ucsd", ["EducationalOrganization", "CollegeOrUniversity", "Organization", "Thing"],
                       "University of California, San Diego")]},
    {"utterance": "sacramento airport was pretty busy",
     "annotations": [A("sacramento airport", ["Airport", "Place", "Thing"], "Sacramento International Airport")]},
    {"utterance": "i did not know san jose is a capital",
     "annotations": [A("san jose", ["City", "Place", "Thing"], "San Jose")]},
    # --- places, music, misc
    {"utterance": "we should visit yosemite national park next summer",
     "annotations": [A("yosemite national park", ["Park", "Place", "TouristAttraction", "Thing"], "Yosemite National Park")]},
    {"utterance": "the beatles are my favorite band",
     "annotations": [A("the beatles", ["MusicGroup", "Organization", "Thing"], "The Beatles")]},
    {"utterance": "listen to bohemian rhapsody right now",
     "annotations": [A("bohemian rhapsody", ["MusicRecording", "Thing"], "Bohemian Rhapsody")]},
    {"utterance": "microsoft makes the xbox 360",
     "annotations": [A("microsoft", ["Corporation", "Organization", "Thing"], "Microsoft")]},
    {"utterance": "have you read moby dick",
     "annotations": [A("moby dick", ["Book", "Thing"], "Moby-Dick")]},
    {"utterance": "taylor swift wrote that song",
     "annotations": [A("taylor swift", ["Person", "Thing"], "Taylor Swift")]},
    {"utterance": "the warriors play right now",
     "annotations": [A("warriors", ["SportsTeam", "Organization", "Thing"], "Golden State Warriors")]},
    {"utterance": "i am watching stranger things tonight",
     "annotations": [A("stranger things", ["TVSeries", "Thing"], "Stranger Things")]},
    {"utterance": "minecraft is the best game ever made",
     "annotations": [A("minecraft", ["VideoGame", "VideoGameSeries", "Thing"], "Minecraft")]},
    {"utterance": "harry potter is my favorite book series",
     "annotations": [A("harry potter", ["BookSeries", "MovieSeries", "Thing"], "Harry Potter")]},
    {"utterance": "we visited yellowstone national park in the spring",
     "annotations": [A("yellowstone national park", ["Park", "Place", "TouristAttraction", "Thing"], "Yellowstone National Park")]},
    # --- negatives
    {"utterance": "hello there", "annotations": []},
    {"utterance": "how are you doing today", "annotations": []},
    {"utterance": "that is so cool", "annotations": []},
    {"utterance": "what do you want to talk about", "annotations": []},
    {"utterance": "i do not know", "annotations": []},
    {"utterance": "tell me something interesting", "annotations": []},
    # --- parse-bearing records
    {"utterance": "i think my favorite star wars is revenge of the sith",
     "annotations": [A("revenge of the sith", SITH_TYPES, SITH),
                     A("star wars", ["MovieSeries", "Thing"], "Star Wars")],
     "parse": FIG3_PARSE},
    {"utterance": "the lakers play right now",
     "annotations": [A("lakers", ["SportsTeam", "Organization", "Thing"], "Los Angeles Lakers")],
     "parse": LAKERS_PARSE},
    # --- two more conversations
    {"utterance": "i am reading the hunger games right now",
     "annotations": [A("the hunger games", ["BookSeries", "MovieSeries", "Thing"], "The Hunger Games")],
     "conversation_id": "hg", "turn": 0},
    {"utterance": "it is my favorite book series",
     "annotations": [], "conversation_id": "hg", "turn": 1},
    {"utterance": "do you like taylor swift",
     "annotations": [A("taylor swift", ["Person", "Thing"], "Taylor Swift")],
     "conversation_id": "ts", "turn": 0},
    {"utterance": "she is an amazing singer",
     "annotations": [], "conversation_id": "ts", "turn": 1},
    {"utterance": "we visited san jose and los angeles last summer",
     "annotations": [A("san jose", ["City", "Place", "Thing"], "San Jose"),
                     A("los angeles", ["City", "Place", "Thing"], "Los Angeles")]},
]

assert len(CORPUS) == 50, len(CORPUS)
with open(f"{OUT}/fixture_corpus.jsonl", "w") as f:
    for rec in CORPUS:
        norm_ok(rec["utterance"])
        for a in rec.get("annotations", []):
            norm_ok(a["surface"])
        f.write(json.dumps(rec) + "\n")

CLEAN = [
    {"utterance": "i saw alien covenant the other day",
     "annotations": [A("alien covenant", ["Movie", "Thing"], "Alien: Covenant")]},
    {"utterance": "i want to visit black mountain",
     "annotations": [A("black mountain", ["TouristAttraction", "Mountain", "Place", "Thing"], "Black Mountain")]},
    {"utterance": "x man is my favorite comic hero",
     "annotations": [A("x man", ["Thing"], "X-Man")]},
    {"utterance": "the beatles are my favorite band",
     "annotations": [A("the beatles", ["MusicGroup", "Organization", "Thing"], "The Beatles")]},
    {"utterance": "i like moon knight because he can see the future sometimes",
     "annotations": [A("moon knight", ["Thing"], "Moon Knight")]},
]
with open(f"{OUT}/clean_corpus.jsonl", "w") as f:
    for rec in CLEAN:
        norm_ok(rec["utterance"])
        f.write(json.dumps(rec) + "\n")

MOON_SCRIPT = [
    {"utterance": "lets talk about comic books who is your favorite character",
     "conversation_id": "mk", "speaker": "user"},
    {"utterance": "i like moon knight because he can see the future sometimes",
     "conversation_id": "mk", "speaker": "system"},
    {"utterance": "i guess that is a cool power when did he first appear",
     "conversation_id": "mk", "speaker": "user"},
]
with open(f"{OUT}/moon_script.jsonl", "w") as f:
    for rec in MOON_SCRIPT:
        f.write(json.dumps(rec) + "\n")

PARITY = [
    {"utterance": "i think my favorite star wars movie is revenge of the sith", "conversation_id": "p1"},
    {"utterance": "i am reading the hunger games right now", "conversation_id": "p2"},
    {"utterance": "i m watching the lakers play right now", "conversation_id": "p3"},
    {"utterance": "have you seen the new star wars movie", "conversation_id": "p1"},
    {"utterance": "it is my favorite book series", "conversation_id": "p2"},
    {"utterance": "i hate los angeles even though i live in california", "conversation_id": "p3"},
    {"utterance": "hello there", "conversation_id": "p1"},
    {"utterance": "have you read moby dick", "conversation_id": "p2"},
    {"utterance": "the warriors play right now", "conversation_id": "p3"},
]
with open(f"{OUT}/parity_script.jsonl", "w") as f:
    for rec in PARITY:
        f.write(json.dumps(rec) + "\n")

print("fixtures written")
