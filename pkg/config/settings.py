import os
from dotenv import load_dotenv

load_dotenv()

# ========================================
# ТОЧНОСТЬ ВЫЧИСЛЕНИЙ
# ========================================

PRECISION_BITS = int(os.getenv("KNEADLAB_PRECISION") or os.getenv("KNEADLAB_PRECISION_BITS") or "256")  # Рабочая мантисса в битах
PRECISION_MIN_BITS = 64             # Нижняя граница точности
PRECISION_ESCALATION_FACTOR = 2     # Множитель точности при эскалации
PRECISION_MAX_ESCALATIONS = 4       # Макс. количество эскалаций до SignUndecidable
PRECISION_GUARD_BITS = 64           # Запас сверх оценки по глубине орбиты
PRECISION_BITS_QUANTUM = 64         # Округление оценки точности вверх до кратного

# Точная рациональная арифметика
EXACT_ARITHMETIC_MAX_BITS = 4096    # Макс. размер точной дроби (числитель + знаменатель)

# ========================================
# СЕМЕЙСТВА ОТОБРАЖЕНИЙ
# ========================================

CUBIC_GAMMA_MAX = "1/64"            # h: параметр кубического семейства в [0, h]
DEG7_GAMMA_MAX = "1/64"             # h': параметр семейства степени 7 в [0, h']
DEG7_Y0 = "16/35"                   # y0 = T(-1)
DEG7_X0_BRACKET = ("3/2", "2")      # x0 — корень T(x) = y0 на этом отрезке

# ========================================
# КОНСТРУКЦИЯ (ШАГИ A И B)
# ========================================

# Скорости роста производной
RATE_LAMBDA = "1.2"                 # lambda: CE-скорость кубического семейства
RATE_LAMBDA_PRIME = "2.0"           # lambda': нижняя граница |g'| в неподвижных точках
RATE_A_LAMBDA1 = "0.5"              # lambda1 для A-шагов (свидетель не-CE)
RATE_A_LAMBDA2 = "0.9"              # lambda2 для A-шагов
RATE_DUAL_LAMBDA1 = "0.95"          # lambda1 для двойных A-шагов (затухание в deg7)
RATE_DUAL_LAMBDA2 = "1.05"          # lambda2 для двойных A-шагов (рост в cubic)
RATE_DEG7_LAMBDA = "1.2"            # lambda~ для семейства степени 7
RATE_DEG7_LAMBDA_PRIME = "2.0"      # lambda~'

# Поиск k1, k2, k3
K_SEARCH_FLOOR = 8                  # Нижняя граница: max(t_n, K_SEARCH_FLOOR)
K_SEARCH_GROWTH = 2                 # Геометрический рост k
K_SEARCH_CAP = 2 ** 14              # Потолок k на одном шаге

# Старт конструкции
BOOTSTRAP_K0_START = 2              # Начальное k0 для S0 = I1^(k0+1)
BOOTSTRAP_K0_LIMIT = 12             # Последнее k0, которое пробуем
BOOTSTRAP_K_LIMIT = 64              # Последнее k для S1 = S0 I2^(k+1)

# Масштаб шагов B: Delta_k = 2^(-k)
DELTA_SCHEDULE_BASE = 2

# ========================================
# ПОИСК ПАРАМЕТРОВ
# ========================================

SAMPLE_COUNT = 9                    # Внутренние точки выборочной сертификации
PARAM_BISECT_GUARD_BITS = 64        # Бисекция по gamma на столько бит глубже окна
PARAM_PROBE_OFFSETS = (8, 16, 32)   # Сдвиги пробной точки: ширина / 2^k

# Реализация точек
REALIZE_TOLERANCE_FRACTION = 2      # Допуск 2^(-bits / 2)

# ========================================
# PULLBACK-ЭКСПЕРИМЕНТ
# ========================================

PULLBACK_DEFAULT_POLICY = "itinerary"   # leftmost | random | itinerary | exhaustive
PULLBACK_DEFAULT_DELTA = "1e-3"
PULLBACK_EXHAUSTIVE_MAX_DEPTH = 12      # Полный перебор ветвей растет как 3^n
PULLBACK_DEFAULT_SEED = 0

# ========================================
# ЛОГИРОВАНИЕ
# ========================================

LOG_LEVEL = os.getenv("KNEADLAB_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# JSON логирование
ENABLE_JSON_LOGGING = True  # Включить JSON логирование параллельно с текстовым
JSON_LOG_FILE = os.getenv("KNEADLAB_JSON_LOG_FILE", "logs/kneadlab.json")

# Ротация логов
LOG_ROTATION_ENABLED = True  # Включить ротацию файлов логов
LOG_MAX_BYTES = 1 * 1024 * 1024  # Макс. размер файла логов (1 МБ)
LOG_BACKUP_COUNT = 5  # Количество архивных файлов логов

# Мониторинг
SLOW_OPERATION_THRESHOLD = 5.0  # Порог для медленных операций (секунды)

# ========================================
# ПАРАЛЛЕЛИЗМ И ХРАНЕНИЕ
# ========================================

DEFAULT_JOBS = 1                    # Процессов для выборочных проверок
STATE_SCHEMA_VERSION = 1            # Версия JSON-файла состояния конструкции
STATE_JSON_INDENT = 2
OUTPUT_DIR = os.getenv("KNEADLAB_OUTPUT_DIR", "out")  # Каталог файлов состояния по умолчанию
REPORT_DIGITS = 30                  # Значащих цифр в значениях отчетов проверки
