#!/usr/bin/env python3
# Copyright 2026 The AssessKit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the synthetic demo fixtures under data/.

data/writing/{prompts,responses,ratings}.jsonl: rated writing responses
whose quality level drives length, vocabulary and error rate.
data/sessions.jsonl: three weeks of test sessions for the monitor.
Deterministic; rerunning reproduces the committed files.
"""

import json
import pathlib
import random

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

PROMPTS = {
    "technology": "Describe how technology has changed the way people communicate.",
    "city": "Would you rather live in a big city or in the countryside? Explain why.",
    "environment": "What can people do to protect the environment?",
    "school": "Describe a teacher or a school subject that was important to you.",
}

BASIC = {
    "technology": ["I like my phone.", "Phone is good for talk with friend.",
                   "I play game on computer.", "Internet is very good.",
                   "My friend send me message every day.", "I have a computer at home."],
    "city": ["I like the city.", "City is big and nice.", "In city there is many shop.",
             "Village is small.", "I live in a house with my family.", "The city have bus."],
    "environment": ["We need clean water.", "The tree is good.", "I not like rubbish.",
                    "People must clean the park.", "The air is bad in city.", "I like nature."],
    "school": ["My teacher is good.", "I like school.", "My teacher help me.",
               "I study english every day.", "The class is big.", "He is a very kind man."],
}

MIDDLE = {
    "technology": ["Technology has changed communication because we can send messages quickly.",
                   "Many people use social media to stay in contact with their friends.",
                   "However, some people spend too much time on their phones.",
                   "In my opinion, video calls are useful when family lives far away.",
                   "It is important to use technology in a responsible way.",
                   "Students also use the internet to find information for their homework."],
    "city": ["I would prefer to live in a big city because there are more opportunities.",
             "The city has better transport, hospitals and universities.",
             "However, the countryside is quieter and the air is cleaner.",
             "Life in the city can be expensive and stressful.",
             "In my opinion, young people usually prefer the city.",
             "When I have children, I may move to a smaller town."],
    "environment": ["People can protect the environment by recycling plastic and paper.",
                    "We should use public transport instead of driving every day.",
                    "Governments must also reduce pollution from factories.",
                    "Saving energy at home is another simple solution.",
                    "Many students organize activities to clean local parks.",
                    "If everyone helps, the situation will improve."],
    "school": ["The most important subject for me was history because it explained our past.",
               "My teacher always encouraged us to ask questions in class.",
               "She prepared interesting activities and explained difficult ideas clearly.",
               "Thanks to her, I decided to study at university.",
               "I realized that knowledge can change the way we see the world.",
               "I still remember her advice when I have a problem."],
}

ADVANCED = {
    "technology": ["Digital technology has fundamentally transformed communication, enabling instantaneous exchanges across continents.",
                   "Although social media fosters connection, it arguably undermines the depth of face-to-face conversation.",
                   "Furthermore, the constant stream of notifications can exacerbate stress and reduce concentration.",
                   "Consequently, educators should emphasize digital literacy so that young people evaluate information critically.",
                   "Nevertheless, video conferencing has proved crucial for families and businesses separated by distance.",
                   "Ultimately, the impact of technology depends on whether we use it deliberately rather than compulsively."],
    "city": ["Although metropolitan areas offer considerable professional opportunities, they also impose substantial costs.",
             "Housing prices have increased significantly, which forces many residents into long commutes.",
             "By contrast, rural communities provide tranquility and a stronger sense of belonging.",
             "Nevertheless, the countryside frequently lacks adequate infrastructure, particularly healthcare and broadband.",
             "Consequently, my preference would ultimately depend on my stage of life and priorities.",
             "A compelling compromise is a medium-sized town that combines efficient services with access to nature."],
    "environment": ["Protecting the environment requires a comprehensive strategy that combines individual responsibility with ambitious policy.",
                    "Individuals can substantially reduce their footprint by consuming less and prioritizing sustainable products.",
                    "However, voluntary measures alone are insufficient to mitigate the consequences of climate change.",
                    "Governments should therefore implement carbon pricing and invest in renewable energy infrastructure.",
                    "Furthermore, international cooperation is essential because pollution does not respect national borders.",
                    "Ultimately, sustained commitment from citizens and institutions will determine whether we succeed."],
    "school": ["The teacher who influenced me most demonstrated that rigorous thinking and curiosity are inseparable.",
               "Rather than simply transmitting facts, she encouraged us to evaluate evidence and justify our interpretations.",
               "Consequently, literature became a means of exploring complex moral questions rather than a compulsory subject.",
               "Her feedback was demanding, albeit always constructive, which motivated me to pursue ambitious goals.",
               "Furthermore, she emphasized that mistakes are an essential part of learning.",
               "Ultimately, her approach shaped both my academic choices and my perspective on education."],
}

L1S = ["Arabic", "Mandarin Chinese", "Telugu", "English", "Spanish", "Gujarati", "Bengali", "other"]


def response_text(rng, topic, level):
    n = 2 + level
    if level <= 2:
        bank = BASIC[topic]
    elif level <= 4:
        bank = MIDDLE[topic] + (BASIC[topic] if level == 3 else [])
    else:
        bank = ADVANCED[topic] + (MIDDLE[topic] if level == 5 else [])
    sentences = [rng.choice(bank) for _ in range(n)]
    if level <= 2 and rng.random() < 0.6:
        sentences.append("I have a apple and he have a orange.")
    return " ".join(sentences)


def writing(rng):
    prompts, responses, ratings = [], [], []
    for pid, text in PROMPTS.items():
        prompts.append({"prompt_id": pid, "text": text})
    for i in range(240):
        topic = list(PROMPTS)[i % 4]
        level = rng.randint(1, 6)
        rid = f"w{i + 1:04d}"
        responses.append({
            "response_id": rid,
            "prompt_id": topic,
            "text": response_text(rng, topic, level),
            "prep_seconds": rng.randint(5, 30),
            "write_seconds": rng.randint(120, 300),
            "demographics": {"gender": rng.choice(["female", "male"]), "l1": rng.choice(L1S)},
        })
        for rater in ("r1", "r2", "r3"):
            score = min(6, max(1, round(level + rng.gauss(0, 0.5))))
            ratings.append({"response_id": rid, "rater_id": rater, "score": score})
    # Blank and token responses, rated at the floor by every rater.
    for i, text in enumerate(["", "", "", "", "I dont know.", "Yes.", "ok", "no idea"]):
        rid = f"w{241 + i:04d}"
        responses.append({"response_id": rid, "prompt_id": list(PROMPTS)[i % 4], "text": text})
        for rater in ("r1", "r2", "r3"):
            ratings.append({"response_id": rid, "rater_id": rater, "score": 1})
    return prompts, responses, ratings


def sessions(rng):
    # Each week has exactly five takers per L1; week 3 shifts the gender mix.
    out = []
    n = 0
    for week in (1, 2, 3):
        females = 20 if week < 3 else 32
        genders = ["female"] * females + ["male"] * (40 - females)
        l1s = [l1 for l1 in L1S for _ in range(40 // len(L1S))]
        rng.shuffle(genders)
        rng.shuffle(l1s)
        for gender, l1 in zip(genders, l1s):
            n += 1
            repeater = rng.random() < 0.15
            s = {
                "session_id": f"s{n:04d}",
                "week": week,
                "total_score": round(rng.uniform(60, 160), 1),
                "demographics": {"gender": gender, "l1": l1},
                "item_exposures": sorted(rng.sample([f"item-{k:02d}" for k in range(1, 21)], 6)),
                "repeater": repeater,
            }
            if repeater:
                s["prior_score"] = round(s["total_score"] - rng.uniform(-5, 15), 1)
            out.append(s)
    return out


def write_jsonl(path, rows):
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


def main():
    rng = random.Random(20260115)
    prompts, responses, ratings = writing(rng)
    write_jsonl(DATA / "writing" / "prompts.jsonl", prompts)
    write_jsonl(DATA / "writing" / "responses.jsonl", responses)
    write_jsonl(DATA / "writing" / "ratings.jsonl", ratings)
    write_jsonl(DATA / "sessions.jsonl", sessions(rng))


if __name__ == "__main__":
    main()
