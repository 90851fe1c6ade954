"""Shared scenario fixtures spanning the supported facility scales."""

TOWNSHIP_DQL = (
    "P:pop=50000,age0_14=0.25,age15_64=0.68,age65_up=0.07,gender=1.01|"
    "H:dis=H(inc=80,res=0.6),D(inc=120,res=0.1),V(inc=80,res=0.25),risk=SM|"
    "C:rel=C0.7M0.3,sexsep=M,trad=0.3,hol=MHR|M:fert=2.3,mar=23,health=80|"
    "I:fac=0.6,water=0.8,infra=0.7|"
    "S:conflict=L,ref=0.02,vio=0.009,trust=0.75|X:gdp=1100,pov=0.25,emp=A0.210.3S0.5,budget=5|"
    "G:temp=27,rain=800,disrisk=F,mat=BC."
)

METROPOLIS_DQL = (
    "P:pop=600000,growth_rate=3.5|"
    "H:dis=T(inc=200,res=0.4),V(inc=150,res=0.3),risk=H|"
    "M:fert=2.8,health=65|"
    "E:total_beds=600,quality_factor=0.5,or_rooms=10|"
    "I:fac=0.4,water=0.3,infra=0.2|"
    "S:conflict=M,vio=0.05|"
    "X:gdp=2500,pov=0.4,budget=50|"
    "G:temp=30,rain=1200,disrisk=F,mat=RC."
)

NEW_CITY_DQL = (
    "P:pop=3000000,growth_rate=4|"
    "H:dis=D(inc=100,res=0.5),C(inc=40,res=0.5),risk=L|"
    "M:fert=1.9,health=90|"
    "I:fac=0.9,water=0.95,infra=0.9|"
    "S:conflict=L,trust=0.8|"
    "X:gdp=12000,pov=0.05,budget=800|"
    "G:temp=18,rain=600,disrisk=N,mat=ST."
)

COASTAL_VILLAGE_DQL = (
    "P:pop=5000,growth_rate=1|"
    "H:dis=M(inc=100,res=0.3),D(inc=50,res=0.2),risk=SM|"
    "M:fert=4.1,mar=19,health=55|"
    "I:fac=0.2,water=0.3,infra=0.2|"
    "S:conflict=L,trust=0.6|"
    "X:gdp=900,pov=0.6,budget=0.8|"
    "G:temp=29,rain=2200,disrisk=C,mat=TM."
)

# Expected planning outcomes for the four scenarios.
SCENARIOS = [
    ("township", TOWNSHIP_DQL, "Secondary", False, 172, 2829),
    ("metropolis", METROPOLIS_DQL, "Tertiary", False, 1500, 26294),
    ("new_city", NEW_CITY_DQL, "Tertiary", False, 1500, 40348),
    ("coastal_village", COASTAL_VILLAGE_DQL, "Primary", True, 10, 544),
]
