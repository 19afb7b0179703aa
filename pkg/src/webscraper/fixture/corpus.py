"""Fixed word and sentence pools for generated fixture text."""

from __future__ import annotations

import random

ENGLISH_WORDS = (
    "harbor council budget river school market railway festival museum bridge "
    "library coast mountain village garden report energy water transport health "
    "science farmer orchestra election storm forest island airport hospital factory "
    "student teacher police court museum season record league summit archive "
    "vaccine climate housing tourism harvest fishing copper satellite telescope "
    "mayor minister engineer volunteer artist nurse pilot baker miner sailor "
    "opens closes expands delays approves rejects launches repairs reviews restores "
    "announces celebrates funds studies measures protects builds welcomes warns plans "
    "new local annual coastal northern southern historic quiet rapid modest public "
    "regional national early late record heavy bright careful steady small large"
).split()

# Everyday sentences; the generator samples and shuffles these for Chinese pages.
CHINESE_SENTENCES = (
    "市政府今天宣布新的交通改善计划",
    "今年夏天的降雨量比往年明显减少",
    "当地农民正在准备秋季的收获工作",
    "图书馆将在下个月延长开放时间",
    "研究人员在山区发现了一种罕见的植物",
    "学校举办了一场关于环境保护的讲座",
    "港口的货运量在第三季度持续增长",
    "音乐节吸引了来自各地的大批游客",
    "医院引进了新的设备以缩短等候时间",
    "铁路部门计划在明年完成线路升级",
    "博物馆展出了一批珍贵的历史文物",
    "社区志愿者清理了河岸附近的垃圾",
    "气象局提醒市民注意强风和暴雨",
    "新的公园预计在年底前向公众开放",
    "科学家正在研究海水温度上升的影响",
    "议会通过了关于住房补贴的新法案",
    "渔民表示今年的渔获量有所回升",
    "工程师检查了大桥的结构安全情况",
    "地方剧团正在排练一部新的话剧",
    "机场启用了新的自助值机系统",
    "老街的商店在节日期间延长营业时间",
    "研究显示步行有助于改善身体健康",
    "乡村地区的网络覆盖范围不断扩大",
    "运动会的报名人数创下历史新高",
)

CHINESE_TITLE_PHRASES = (
    "城市新闻", "地方动态", "社区观察", "科技前沿", "文化速递", "经济简报",
    "交通快讯", "环境报道", "教育专题", "健康生活", "体育赛事", "农业观察",
)


def english_sentence(rng: random.Random, n_words: tuple[int, int] = (6, 12)) -> str:
    words = [rng.choice(ENGLISH_WORDS) for _ in range(rng.randint(*n_words))]
    return " ".join(words).capitalize() + "."


def english_title(rng: random.Random) -> str:
    return " ".join(w.capitalize() for w in (rng.choice(ENGLISH_WORDS) for _ in range(rng.randint(4, 7))))


def english_paragraph(rng: random.Random) -> str:
    return " ".join(english_sentence(rng) for _ in range(rng.randint(2, 4)))


def chinese_title(rng: random.Random) -> str:
    return rng.choice(CHINESE_TITLE_PHRASES) + "：" + rng.choice(CHINESE_SENTENCES)


def chinese_paragraph(rng: random.Random) -> str:
    return "，".join(rng.sample(CHINESE_SENTENCES, rng.randint(2, 4))) + "。"
