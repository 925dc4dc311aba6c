#!/usr/bin/env python3
"""Regenerate the desk-scale fixture corpus under src/healthgenie/data/fixture/.

The corpus is hand-designed: 25 recipes, ~90 ingredients, 9 relation types,
with deliberate gaps (missing attributes, an unclassified seasoning, an
isolated node) that the borderline/conflict tests rely on. Edit the tables
here, rerun, and commit the CSVs.
"""
from __future__ import annotations

import csv
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "healthgenie" / "data" / "fixture"

# id -> (label, {categorical attr: value})
INGREDIENTS = {
    "Tofu": ("Tofu", {"origin": "plantDerived", "foodClass": "legume"}),
    "Tempeh": ("Tempeh", {"origin": "plantDerived", "foodClass": "legume"}),
    "Seitan": ("Seitan", {"origin": "plantDerived", "foodClass": "grain", "allergenClass": "gluten"}),
    "Soybean": ("Soybean", {"origin": "plantDerived", "foodClass": "legume", "allergenClass": "soy"}),
    "Wheat": ("Wheat", {"origin": "plantDerived", "foodClass": "grain", "allergenClass": "gluten"}),
    "Rice": ("Rice", {"origin": "plantDerived", "foodClass": "grain", "carbProfile": "highCarb"}),
    "Quinoa": ("Quinoa", {"origin": "plantDerived", "foodClass": "grain"}),
    "Oats": ("Oats", {"origin": "plantDerived", "foodClass": "grain"}),
    "Pasta": ("Pasta", {"origin": "plantDerived", "foodClass": "grain", "allergenClass": "gluten", "carbProfile": "highCarb"}),
    "Bread": ("Bread", {"origin": "plantDerived", "foodClass": "grain", "allergenClass": "gluten", "carbProfile": "highCarb"}),
    "Tortilla": ("Tortilla", {"origin": "plantDerived", "foodClass": "grain", "allergenClass": "gluten", "carbProfile": "highCarb"}),
    "Lentils": ("Lentils", {"origin": "plantDerived", "foodClass": "legume"}),
    "Chickpeas": ("Chickpeas", {"origin": "plantDerived", "foodClass": "legume"}),
    "BlackBeans": ("Black Beans", {"origin": "plantDerived", "foodClass": "legume"}),
    "WhiteBeans": ("White Beans", {"origin": "plantDerived", "foodClass": "legume"}),
    "Peas": ("Peas", {"origin": "plantDerived", "foodClass": "legume"}),
    "Broccoli": ("Broccoli", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Spinach": ("Spinach", {"origin": "plantDerived", "foodClass": "vegetable", "subClass": "leafyGreen"}),
    "Kale": ("Kale", {"origin": "plantDerived", "foodClass": "vegetable", "subClass": "leafyGreen"}),
    "Arugula": ("Arugula", {"origin": "plantDerived", "foodClass": "vegetable", "subClass": "leafyGreen"}),
    "Lettuce": ("Lettuce", {"origin": "plantDerived", "foodClass": "vegetable", "subClass": "leafyGreen"}),
    "Cabbage": ("Cabbage", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "BokChoy": ("Bok Choy", {"origin": "plantDerived", "foodClass": "vegetable", "subClass": "leafyGreen"}),
    "Cucumber": ("Cucumber", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Zucchini": ("Zucchini", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Eggplant": ("Eggplant", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "BellPepper": ("Bell Pepper", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Onion": ("Onion", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Garlic": ("Garlic", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Ginger": ("Ginger", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Carrot": ("Carrot", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Celery": ("Celery", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Mushroom": ("Mushroom", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Tomato": ("Tomato", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "CrushedTomato": ("Crushed Tomato", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "TomatoPaste": ("Tomato Paste", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Potato": ("Potato", {"origin": "plantDerived", "foodClass": "vegetable", "carbProfile": "highCarb"}),
    "SweetPotato": ("Sweet Potato", {"origin": "plantDerived", "foodClass": "vegetable", "carbProfile": "highCarb"}),
    "Corn": ("Corn", {"origin": "plantDerived", "foodClass": "vegetable", "carbProfile": "highCarb"}),
    "GreenBeans": ("Green Beans", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Avocado": ("Avocado", {"origin": "plantDerived", "foodClass": "fruit"}),
    "Scallion": ("Scallion", {"origin": "plantDerived", "foodClass": "vegetable"}),
    "Basil": ("Basil", {"origin": "plantDerived", "foodClass": "herb"}),
    "Cilantro": ("Cilantro", {"origin": "plantDerived", "foodClass": "herb"}),
    "Parsley": ("Parsley", {"origin": "plantDerived", "foodClass": "herb"}),
    "Oregano": ("Oregano", {"origin": "plantDerived", "foodClass": "herb"}),
    "Thyme": ("Thyme", {"origin": "plantDerived", "foodClass": "herb"}),
    "Rosemary": ("Rosemary", {"origin": "plantDerived", "foodClass": "herb"}),
    "BlackPepper": ("Black Pepper", {"origin": "plantDerived", "foodClass": "spice"}),
    "Cumin": ("Cumin", {"origin": "plantDerived", "foodClass": "spice"}),
    "Turmeric": ("Turmeric", {"origin": "plantDerived", "foodClass": "spice"}),
    "Paprika": ("Paprika", {"origin": "plantDerived", "foodClass": "spice"}),
    "MysterySeasoning": ("Mystery Seasoning", {}),  # unclassified on purpose
    "Saffron": ("Saffron", {"origin": "plantDerived", "foodClass": "spice"}),  # isolated on purpose
    "Lemon": ("Lemon", {"origin": "plantDerived", "foodClass": "fruit"}),
    "Lime": ("Lime", {"origin": "plantDerived", "foodClass": "fruit"}),
    "Apple": ("Apple", {"origin": "plantDerived", "foodClass": "fruit"}),
    "Banana": ("Banana", {"origin": "plantDerived", "foodClass": "fruit", "carbProfile": "highCarb"}),
    "Berries": ("Berries", {"origin": "plantDerived", "foodClass": "fruit"}),
    "OliveOil": ("Olive Oil", {"origin": "plantDerived", "foodClass": "oil"}),
    "SesameOil": ("Sesame Oil", {"origin": "plantDerived", "foodClass": "oil"}),
    "CoconutMilk": ("Coconut Milk", {"origin": "plantDerived", "foodClass": "condiment"}),
    "SoySauce": ("Soy Sauce", {"origin": "plantDerived", "foodClass": "condiment", "allergenClass": "soy"}),
    "Miso": ("Miso", {"origin": "plantDerived", "foodClass": "condiment", "allergenClass": "soy"}),
    "Vinegar": ("Vinegar", {"origin": "plantDerived", "foodClass": "condiment"}),
    "Mustard": ("Mustard", {"origin": "plantDerived", "foodClass": "condiment"}),
    "MapleSyrup": ("Maple Syrup", {"origin": "plantDerived", "foodClass": "condiment"}),
    "Honey": ("Honey", {"origin": "animalDerived", "foodClass": "condiment"}),
    "Salsa": ("Salsa", {"origin": "plantDerived", "foodClass": "condiment"}),
    "MarinaraSauce": ("Marinara Sauce", {"origin": "plantDerived", "foodClass": "condiment"}),
    "Hummus": ("Hummus", {"origin": "plantDerived", "foodClass": "condiment"}),
    "PeanutButter": ("Peanut Butter", {"origin": "plantDerived", "foodClass": "condiment", "allergenClass": "nut"}),
    "Almonds": ("Almonds", {"origin": "plantDerived", "foodClass": "nut", "allergenClass": "nut"}),
    "Walnuts": ("Walnuts", {"origin": "plantDerived", "foodClass": "nut", "allergenClass": "nut"}),
    "Cheese": ("Cheese", {"origin": "animalDerived", "foodClass": "dairy", "allergenClass": "dairy"}),
    "Mozzarella": ("Mozzarella", {"origin": "animalDerived", "foodClass": "dairy", "allergenClass": "dairy"}),
    "Milk": ("Milk", {"origin": "animalDerived", "foodClass": "dairy", "allergenClass": "dairy"}),
    "Butter": ("Butter", {"origin": "animalDerived", "foodClass": "dairy", "allergenClass": "dairy"}),
    "Yogurt": ("Yogurt", {"origin": "animalDerived", "foodClass": "dairy", "allergenClass": "dairy"}),
    "Egg": ("Egg", {"origin": "animalDerived", "foodClass": "egg", "allergenClass": "egg"}),
    "Chicken": ("Chicken", {"origin": "animalDerived", "foodClass": "meat"}),
    "Beef": ("Beef", {"origin": "animalDerived", "foodClass": "meat"}),
    "Turkey": ("Turkey", {"origin": "animalDerived", "foodClass": "meat"}),
    "Fish": ("Fish", {"origin": "animalDerived", "foodClass": "seafood"}),
    "Salmon": ("Salmon", {"origin": "animalDerived", "foodClass": "seafood"}),
    "Tuna": ("Tuna", {"origin": "animalDerived", "foodClass": "seafood"}),
    "Shrimp": ("Shrimp", {"origin": "animalDerived", "foodClass": "seafood", "allergenClass": "shellfish"}),
}

NUTRIENT_NODES = {
    "Iron": "Iron", "VitaminC": "Vitamin C", "Calcium": "Calcium",
    "Omega3": "Omega-3", "Potassium": "Potassium",
}
CONDITIONS = {
    "Hypertension": "Hypertension", "KidneyStrain": "Kidney Strain",
    "Diabetes": "Diabetes", "Indigestion": "Indigestion",
}
CUISINES = {
    "Italian": "Italian", "Japanese": "Japanese", "Mexican": "Mexican",
    "Mediterranean": "Mediterranean", "Indian": "Indian", "American": "American",
}
METHODS = {
    "Steaming": "Steaming", "Grilling": "Grilling", "Baking": "Baking",
    "StirFrying": "Stir Frying", "Roasting": "Roasting",
}
BENEFITS = {
    "HeartHealth": "Heart Health", "DigestiveHealth": "Digestive Health",
    "MuscleRecovery": "Muscle Recovery", "WeightManagement": "Weight Management",
    "BoneStrength": "Bone Strength",
}

# id -> (label, cuisine, method|None, ingredients, numeric attrs (sodium in mg),
#        categorical attrs, recommendsFor conditions)
RECIPES = {
    "GrilledTofuWrap": ("Grilled Tofu Wrap", "Mediterranean", "Grilling",
        ["Tofu", "Tortilla", "Lettuce", "Avocado", "Lemon", "OliveOil"],
        {"calories": 320, "protein": 12, "sodium_mg": 400, "fiber": 6, "sugar": 3, "fat": 14, "carbs": 38},
        {"methodProfile": "standard"}, ["KidneyStrain"]),
    "TomatoBasilPasta": ("Tomato Basil Pasta", "Italian", "StirFrying",
        ["Pasta", "CrushedTomato", "Basil", "Garlic", "OliveOil"],
        {"calories": 410, "protein": 11, "sodium_mg": 380, "fiber": 5, "sugar": 7, "fat": 9, "carbs": 68},
        {"carbProfile": "highCarb", "methodProfile": "standard"}, ["Hypertension"]),
    "SteamedVeggieBowl": ("Steamed Veggie Bowl", "Japanese", "Steaming",
        ["Broccoli", "Carrot", "Rice", "Ginger", "SesameOil"],
        {"calories": 350, "protein": 9, "sodium_mg": 250, "fiber": 7, "sugar": 6, "fat": 8, "carbs": 55},
        {"methodProfile": "highRetainNutrients"}, ["Indigestion", "Hypertension"]),
    "LemonHerbSalmon": ("Lemon Herb Salmon", "Mediterranean", "Grilling",
        ["Salmon", "Lemon", "Thyme", "OliveOil", "BlackPepper"],
        {"calories": 420, "protein": 34, "sodium_mg": 500, "fiber": 1, "sugar": 1, "fat": 22, "carbs": 5},
        {"methodProfile": "standard"}, []),
    "SpicyChickpeaStew": ("Spicy Chickpea Stew", "Indian", "StirFrying",
        ["Chickpeas", "CrushedTomato", "Onion", "Garlic", "BlackPepper", "Cumin"],
        {"calories": 380, "protein": 14, "sodium_mg": 450, "fiber": 11, "sugar": 9, "fat": 10, "carbs": 52},
        {"methodProfile": "standard"}, ["Diabetes"]),
    "CucumberQuinoaSalad": ("Cucumber Quinoa Salad", "Mediterranean", None,
        ["Quinoa", "Cucumber", "Lemon", "Parsley", "OliveOil"],
        {"calories": 290, "protein": 8, "sodium_mg": 200, "fiber": 5, "sugar": 4, "fat": 12, "carbs": 34},
        {}, ["Hypertension", "KidneyStrain"]),
    "CheeseOmelette": ("Cheese Omelette", "American", "StirFrying",
        ["Egg", "Cheese", "Butter", "BlackPepper"],
        {"calories": 450, "protein": 22, "sodium_mg": 700, "fiber": 0, "sugar": 2, "fat": 35, "carbs": 3},
        {"methodProfile": "standard"}, []),
    "ShrimpStirFry": ("Shrimp Stir Fry", "Japanese", "StirFrying",
        ["Shrimp", "BellPepper", "SoySauce", "Rice", "Garlic"],
        {"calories": 430, "protein": 26, "sodium_mg": 1100, "fiber": 3, "sugar": 5, "fat": 12, "carbs": 48},
        {"methodProfile": "standard"}, []),
    "MisoGlazedEggplant": ("Miso Glazed Eggplant", "Japanese", "Baking",
        ["Eggplant", "Miso", "SesameOil", "Ginger"],
        {"calories": 390, "protein": 7, "sodium_mg": 600, "fiber": 8, "sugar": 12, "fat": 16, "carbs": 30},
        {"methodProfile": "standard"}, []),
    "SpinachLentilCurry": ("Spinach Lentil Curry", "Indian", "StirFrying",
        ["Spinach", "Lentils", "CoconutMilk", "Garlic", "Ginger", "Turmeric"],
        {"calories": 390, "protein": 16, "sodium_mg": 350, "fiber": 12, "sugar": 6, "fat": 14, "carbs": 45},
        {"methodProfile": "standard"}, ["Diabetes"]),
    "VeggieBurrito": ("Veggie Burrito", "Mexican", None,
        ["Tortilla", "BlackBeans", "Rice", "Salsa", "Avocado"],
        {"calories": 520, "protein": 15, "sodium_mg": 800, "fiber": 13, "sugar": 5, "fat": 16, "carbs": 72},
        {"carbProfile": "highCarb"}, []),
    "BakedZitiMarinara": ("Baked Ziti Marinara", "Italian", "Baking",
        ["Pasta", "MarinaraSauce", "Cheese", "Oregano"],
        {"calories": 560, "protein": 24, "sodium_mg": 900, "fiber": 6, "sugar": 10, "fat": 18, "carbs": 70},
        {"carbProfile": "highCarb", "methodProfile": "standard"}, []),
    "ChickenCaesarSalad": ("Chicken Caesar Salad", "American", None,
        ["Chicken", "Lettuce", "Cheese", "Bread", "OliveOil"],
        {"calories": 470, "protein": 35, "sodium_mg": 850, "fiber": 3, "sugar": 3, "fat": 24, "carbs": 25},
        {}, []),
    "BeefStirFry": ("Beef Stir Fry", "Japanese", "StirFrying",
        ["Beef", "SoySauce", "Broccoli", "Rice", "Garlic"],
        {"calories": 540, "protein": 30, "sodium_mg": 1200, "fiber": 4, "sugar": 6, "fat": 20, "carbs": 55},
        {"methodProfile": "standard"}, []),
    "MushroomRisotto": ("Mushroom Risotto", "Italian", "StirFrying",
        ["Rice", "Mushroom", "Butter", "Cheese", "Onion"],
        {"calories": 480, "protein": 12, "sodium_mg": 650, "fiber": 3, "sugar": 4, "fat": 16, "carbs": 68},
        {"carbProfile": "highCarb", "methodProfile": "standard"}, []),
    "GardenMinestrone": ("Garden Minestrone", "Italian", None,
        ["CrushedTomato", "Carrot", "Celery", "Pasta", "WhiteBeans", "Basil"],
        {"calories": 280, "protein": 9, "sodium_mg": 420, "fiber": 8, "sugar": 8, "fat": 5, "carbs": 48},
        {}, ["Hypertension", "KidneyStrain"]),
    "TofuVeggieSkewers": ("Tofu Veggie Skewers", "Mediterranean", "Grilling",
        ["Tofu", "BellPepper", "Zucchini", "Onion", "OliveOil"],
        {"calories": 260, "protein": 13, "sodium_mg": 180, "fiber": 4, "sugar": 6, "fat": 13, "carbs": 20},
        {"methodProfile": "standard"}, ["KidneyStrain"]),
    "FruitYogurtParfait": ("Fruit Yogurt Parfait", "American", None,
        ["Yogurt", "Berries", "Oats", "Honey"],
        {"calories": 330, "protein": 10, "sodium_mg": 120, "fiber": 4, "sugar": 28, "fat": 8, "carbs": 52},
        {}, []),
    "AvocadoToast": ("Avocado Toast", "American", None,
        ["Bread", "Avocado", "Lemon", "BlackPepper"],
        {"calories": 340, "protein": 8, "fiber": 7, "sugar": 2, "fat": 18, "carbs": 36},  # sodium unknown
        {}, []),
    "MysteryVeggieBowl": ("Mystery Veggie Bowl", "American", None,
        ["MysterySeasoning", "Rice", "Broccoli", "Carrot"],
        {"protein": 7, "sodium_mg": 200, "fiber": 5},  # calories unknown
        {}, []),
    "SteamedFishGinger": ("Steamed Fish with Ginger", "Japanese", "Steaming",
        ["Fish", "Ginger", "Scallion", "SoySauce"],
        {"calories": 310, "protein": 28, "sodium_mg": 750, "fiber": 1, "sugar": 2, "fat": 9, "carbs": 8},
        {"methodProfile": "highRetainNutrients"}, []),
    "PeanutNoodles": ("Peanut Noodles", "Japanese", "StirFrying",
        ["Pasta", "PeanutButter", "SoySauce", "Scallion", "Garlic"],
        {"calories": 550, "protein": 18, "sodium_mg": 950, "fiber": 5, "sugar": 9, "fat": 24, "carbs": 62},
        {"carbProfile": "highCarb", "methodProfile": "standard"}, []),
    "CapreseSalad": ("Caprese Salad", "Italian", None,
        ["Tomato", "Mozzarella", "Basil", "OliveOil"],
        {"calories": 320, "protein": 12, "sodium_mg": 420, "fiber": 2, "sugar": 5, "fat": 24, "carbs": 8},
        {}, []),
    "BananaOatPancakes": ("Banana Oat Pancakes", "American", "StirFrying",
        ["Banana", "Oats", "Egg", "MapleSyrup", "Milk"],
        {"calories": 410, "protein": 11, "sodium_mg": 300, "fiber": 5, "sugar": 22, "fat": 9, "carbs": 70},
        {"carbProfile": "highCarb", "methodProfile": "standard"}, []),
    "RoastedVeggiePlatter": ("Roasted Veggie Platter", "Mediterranean", "Roasting",
        ["Zucchini", "Eggplant", "BellPepper", "OliveOil", "Rosemary", "TomatoPaste"],
        {"calories": 240, "protein": 5, "sodium_mg": 150, "fiber": 7, "sugar": 10, "fat": 14, "carbs": 22},
        {"methodProfile": "standard"}, ["Hypertension", "KidneyStrain"]),
}

COMPOUND_PARTS = {  # containsIngredient
    "MarinaraSauce": ["CrushedTomato", "Garlic", "Basil", "OliveOil"],
    "Salsa": ["Tomato", "Onion", "Cilantro", "Lime"],
    "Hummus": ["Chickpeas", "Garlic", "Lemon", "OliveOil"],
}

DERIVES_FROM = [
    ("Tofu", "Soybean"), ("Tempeh", "Soybean"), ("SoySauce", "Soybean"), ("Miso", "Soybean"),
    ("Bread", "Wheat"), ("Pasta", "Wheat"), ("Tortilla", "Wheat"), ("Seitan", "Wheat"),
    ("Cheese", "Milk"), ("Mozzarella", "Milk"), ("Butter", "Milk"), ("Yogurt", "Milk"),
]

SUBSTITUTABLE_BY = [  # (staple, stand-in)
    ("CrushedTomato", "TomatoPaste"), ("Butter", "OliveOil"), ("Rice", "Quinoa"),
    ("Milk", "CoconutMilk"), ("Pasta", "Zucchini"),
]

NUTRIENT_EDGES = [  # ingredient contains nutrient
    ("Spinach", "Iron"), ("Kale", "Iron"), ("Kale", "Calcium"), ("Lentils", "Iron"),
    ("Broccoli", "VitaminC"), ("Lemon", "VitaminC"), ("Lime", "VitaminC"),
    ("Salmon", "Omega3"), ("Fish", "Omega3"), ("Milk", "Calcium"), ("Yogurt", "Calcium"),
    ("Tofu", "Calcium"), ("Banana", "Potassium"), ("Avocado", "Potassium"),
]

PROMOTES = [
    ("Oats", "HeartHealth"), ("Salmon", "HeartHealth"), ("Yogurt", "DigestiveHealth"),
    ("Ginger", "DigestiveHealth"), ("Lentils", "MuscleRecovery"), ("Tofu", "MuscleRecovery"),
    ("Kale", "BoneStrength"), ("Milk", "BoneStrength"), ("Broccoli", "WeightManagement"),
    ("Cucumber", "WeightManagement"),
]

RELATIONS = [
    ("contains", "recipe or compound holds an ingredient/nutrient", "containedIn"),
    ("belongsToCuisine", "recipe is part of a culinary tradition", "cuisineOf"),
    ("recommendsFor", "dish suits a health condition", "recommendedVia"),
    ("substitutableBy", "object can stand in for subject", "substituteFor"),
    ("containsIngredient", "compound ingredient holds a base ingredient", "ingredientOf"),
    ("derivesFrom", "food product made from a source food", "sourceOf"),
    ("neutralizeOdor", "subject suppresses the object's odor", "odorNeutralizedBy"),
    ("usesMethod", "recipe cooked with a technique", "methodOf"),
    ("promotes", "food supports a health benefit", "promotedBy"),
]

SYNONYMS = [
    ("pepper", "black pepper"),
    ("crushed tomatoes", "crushed tomato"),
    ("prawns", "shrimp"),
    ("prawn", "shrimp"),
    ("fishy", "fish"),
    ("lemon juice", "lemon"),
    ("courgette", "zucchini"),
    ("aubergine", "eggplant"),
    ("garbanzo beans", "chickpeas"),
    ("coriander", "cilantro"),
    ("scallions", "scallion"),
    ("green onion", "scallion"),
    ("rocket", "arugula"),
    ("oatmeal", "oats"),
    ("soy", "soybean"),
    ("heart-healthy", "heart health"),
]

ENTAILMENTS = [
    ("isVegan", "animalDerived"),
    ("isVegetarian", "meat"),
    ("isVegetarian", "seafood"),
    ("isGlutenFree", "gluten"),
]

NOTES = """\
Lemon juice alleviates fishy odor.
Ginger alleviates fishy odor.
Oats are recommended for heart health.
Tempeh is a good substitute for chicken.
Yogurt derives from milk.
Everyone enjoys a warm meal.
"""


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    attrs_rows = []
    def declare(node_id, label, kind, numeric=None, categorical=None):
        wrote = False
        for attr, (value, unit) in (numeric or {}).items():
            attrs_rows.append([node_id, attr, f"{value:g}", unit, kind, label])
            wrote = True
        for attr, value in (categorical or {}).items():
            attrs_rows.append([node_id, attr, value, "none", kind, label])
            wrote = True
        if not wrote:
            attrs_rows.append([node_id, "", "", "", kind, label])

    for node_id, (label, cats) in INGREDIENTS.items():
        declare(node_id, label, "ingredient", categorical=cats)
    for node_id, label in NUTRIENT_NODES.items():
        declare(node_id, label, "nutrient")
    for node_id, label in CONDITIONS.items():
        declare(node_id, label, "condition")
    for node_id, label in CUISINES.items():
        declare(node_id, label, "cuisine")
    for node_id, label in METHODS.items():
        declare(node_id, label, "method")
    for node_id, label in BENEFITS.items():
        declare(node_id, label, "benefit")

    triples = []
    for rid, (label, cuisine, method, ingredients, attrs, cats, conditions) in RECIPES.items():
        numeric = {}
        for attr, value in attrs.items():
            if attr == "sodium_mg":
                numeric["sodium"] = (value, "mg")
            elif attr == "calories":
                numeric["calories"] = (value, "kcal")
            else:
                numeric[attr] = (value, "g")
        declare(rid, label, "recipe", numeric=numeric, categorical=cats)
        for ingredient in ingredients:
            triples.append([rid, "contains", ingredient, "curated"])
        triples.append([rid, "belongsToCuisine", cuisine, "curated"])
        if method:
            triples.append([rid, "usesMethod", method, "curated"])
        for condition in conditions:
            triples.append([rid, "recommendsFor", condition, "curated"])

    for compound, parts in COMPOUND_PARTS.items():
        for part in parts:
            triples.append([compound, "containsIngredient", part, "curated"])
    for a, b in DERIVES_FROM:
        triples.append([a, "derivesFrom", b, "curated"])
    for a, b in SUBSTITUTABLE_BY:
        triples.append([a, "substitutableBy", b, "curated"])
    for a, b in NUTRIENT_EDGES:
        triples.append([a, "contains", b, "curated"])
    for a, b in PROMOTES:
        triples.append([a, "promotes", b, "curated"])

    def write_csv(name, header, rows):
        with open(OUT / name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    write_csv("triples.csv", ["subject", "relation", "object", "provenance"], triples)
    write_csv("attrs.csv", ["node_id", "attr", "value", "unit", "kind_hint", "label"], attrs_rows)
    write_csv("relations.csv", ["relation", "description", "inverse_name"], RELATIONS)

    lexicon = []
    all_labels = {}
    for node_id, (label, _) in INGREDIENTS.items():
        all_labels[node_id] = label
    for table in (NUTRIENT_NODES, CONDITIONS, CUISINES, METHODS, BENEFITS):
        all_labels.update(table)
    for rid, spec in RECIPES.items():
        all_labels[rid] = spec[0]
    for node_id, label in sorted(all_labels.items()):
        lexicon.append([label.lower(), node_id, "1.0"])
    write_csv("lexicon.csv", ["surface_form", "node_id", "weight"], lexicon)
    write_csv("synonyms.csv", ["alias", "canonical_surface"], SYNONYMS)
    write_csv("entailments.csv", ["flag", "excluded_categorical_class"], ENTAILMENTS)
    (OUT / "notes.txt").write_text(NOTES, encoding="utf-8")

    print(f"fixture written to {OUT}: {len(all_labels)} nodes, {len(triples)} triples")


if __name__ == "__main__":
    main()
